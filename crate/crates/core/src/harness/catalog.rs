//! Built-in catalogue for the default scenarios: five topics with seven
//! servers each, one or two of which mirror real public tool servers.

pub struct ServerSpec {
    pub id: &'static str,
    pub is_real: bool,
    pub description: &'static str,
    pub tools: &'static [(&'static str, &'static str)],
}

pub struct TopicSpec {
    pub name: &'static str,
    pub base_latency_s: f64,
    pub servers: &'static [ServerSpec],
}

pub const CATALOG: &[TopicSpec] = &[
    TopicSpec {
        name: "accommodation",
        base_latency_s: 1.0,
        servers: &[
            ServerSpec {
                id: "airbnb",
                is_real: true,
                description: "Vacation rental marketplace: search vacation rental listings, show rental listing details and check a rental listing availability calendar.",
                tools: &[
                    ("search_listings", "Search vacation rental listings near a destination. Homes, apartments, guests, nightly price, amenities."),
                    ("listing_details", "Show details about a rental listing. Photos, house rules, host profile, cancellation policy."),
                    ("listing_availability", "Check a rental listing availability calendar. Open nights, minimum stay."),
                ],
            },
            ServerSpec {
                id: "hotel-booking",
                is_real: false,
                description: "Hotel reservation service: search hotels, book a hotel room reservation and cancel an existing hotel reservation.",
                tools: &[
                    ("search_hotels", "Search hotels around a city. Star rating, nightly rate, distance downtown."),
                    ("book_hotel_room", "Book a hotel room reservation. Room type, arrival date, departure date."),
                    ("cancel_hotel_reservation", "Cancel an existing hotel reservation. Refund amount, cancellation fee."),
                ],
            },
            ServerSpec {
                id: "hostel-finder",
                is_real: false,
                description: "Budget lodging: find cheap hostels with dorm beds and summarize hostel guest reviews.",
                tools: &[
                    ("find_hostels", "Find cheap hostels with dorm beds. Budget hostels sorted per bed price, backpacker rating."),
                    ("hostel_reviews", "Summarize hostel guest reviews. Cleanliness, safety, atmosphere scores."),
                ],
            },
            ServerSpec {
                id: "price-compare",
                is_real: false,
                description: "Hotel price comparison: compare nightly hotel prices across travel sites and create a hotel price drop alert.",
                tools: &[
                    ("compare_hotel_prices", "Compare nightly hotel prices across travel sites. Cheapest site per hotel."),
                    ("price_drop_alert", "Create a hotel price drop alert. Notification when nightly rates fall."),
                ],
            },
            ServerSpec {
                id: "campgrounds",
                is_real: false,
                description: "Outdoor camping: find campgrounds or RV parks near a national park and reserve a tent or RV campsite.",
                tools: &[
                    ("find_campgrounds", "Find campgrounds or RV parks near a national park. Tent sites, hookups, showers."),
                    ("reserve_campsite", "Reserve a tent or RV campsite. Holds campsites during chosen nights."),
                ],
            },
            ServerSpec {
                id: "extended-stay",
                is_real: false,
                description: "Long stays: find serviced apartments with housekeeping and quote monthly rates covering an extended stay.",
                tools: &[
                    ("find_serviced_apartments", "Find serviced apartments with housekeeping. Long business trips, workspace, kitchen."),
                    ("monthly_rate_quote", "Quote monthly rates covering an extended stay. Weekly versus monthly discounts."),
                ],
            },
            ServerSpec {
                id: "accessible-lodging",
                is_real: false,
                description: "Inclusive lodging: find wheelchair accessible rooms and find pet friendly stays allowing dogs or cats.",
                tools: &[
                    ("accessible_rooms", "Find wheelchair accessible rooms. Barrier-free showers, elevators, level entrances."),
                    ("pet_friendly_stays", "Find pet friendly stays allowing dogs or cats. Pet fees, weight limits."),
                ],
            },
        ],
    },
    TopicSpec {
        name: "healthcare",
        base_latency_s: 0.8,
        servers: &[
            ServerSpec {
                id: "medical-info",
                is_real: true,
                description: "Medical reference: retrieve drug information about a medication, check drug interactions between medications and assess symptoms. Drug info, symptom checker.",
                tools: &[
                    ("drug_info", "Retrieve drug information about a medication. Dosage, side effects, warnings, general info."),
                    ("drug_interactions", "Check drug interactions between medications. Dangerous combinations, contraindications."),
                    ("symptom_checker", "Assess symptoms, suggesting possible conditions. Symptom checker, urgency rating, recommended care level."),
                ],
            },
            ServerSpec {
                id: "clinic-finder",
                is_real: false,
                description: "Care locator: find local clinics or urgent care centers and get clinic opening hours.",
                tools: &[
                    ("find_clinics", "Find local clinics or urgent care centers. Distance, wait time, accepted insurance."),
                    ("clinic_hours", "Get clinic opening hours. Weekday schedules, holiday schedules."),
                ],
            },
            ServerSpec {
                id: "pharmacy-locator",
                is_real: false,
                description: "Pharmacy services: find an open local pharmacy and check whether a pharmacy has a prescription stocked. Stock level,",
                tools: &[
                    ("find_pharmacy", "Find an open local pharmacy. Pharmacy hours, curbside pickup."),
                    ("prescription_stock", "Check whether a pharmacy has a prescription stocked. Stock level, quantity, refill timing."),
                ],
            },
            ServerSpec {
                id: "appointments",
                is_real: false,
                description: "Doctor scheduling: book a doctor appointment and cancel a doctor appointment.",
                tools: &[
                    ("book_appointment", "Book a doctor appointment. Open slots, physician, specialist visit."),
                    ("cancel_appointment", "Cancel a doctor appointment. Frees slots, notifies practices."),
                ],
            },
            ServerSpec {
                id: "nutrition",
                is_real: false,
                description: "Nutrition and diet: show nutrition facts about a food and generate a weekly diet meal plan.",
                tools: &[
                    ("nutrition_facts", "Show nutrition facts about a food. Calories, protein, carbohydrates, vitamins."),
                    ("meal_plan", "Generate a weekly diet meal plan. Calories, macronutrients, goals."),
                ],
            },
            ServerSpec {
                id: "vaccines",
                is_real: false,
                description: "Immunization guidance: recommended vaccination schedules per age group and required travel vaccines per country. Vaccination schedule lookup.",
                tools: &[
                    ("vaccination_schedule", "Show a recommended vaccination schedule per age group. Vaccine doses, boosters."),
                    ("travel_vaccines", "List required travel vaccines per country. Malaria pills, entry rules."),
                ],
            },
            ServerSpec {
                id: "mental-health",
                is_real: false,
                description: "Mental wellbeing: find a licensed therapist or counselor and start a guided breathing exercise.",
                tools: &[
                    ("find_therapist", "Find a licensed therapist or counselor. Specialty, language, telehealth."),
                    ("breathing_exercise", "Start a guided breathing exercise. Relieves stress, anxiety."),
                ],
            },
        ],
    },
    TopicSpec {
        name: "flight",
        base_latency_s: 1.2,
        servers: &[
            ServerSpec {
                id: "flight-search",
                is_real: true,
                description: "Flight search engine: search flights between two airports and get live flight status given a flight number.",
                tools: &[
                    ("search_flights", "Search flights between two airports. Airlines, stops, departure times."),
                    ("flight_status", "Get live flight status given a flight number. Departure gate, delay, arrival time."),
                ],
            },
            ServerSpec {
                id: "fare-finder",
                is_real: false,
                description: "Cheap airfare finder: find cheapest airfare along a route and search flexible travel dates along a route. Cheapest fares.",
                tools: &[
                    ("cheapest_fares", "Find cheapest airfare along a route. Calendar, lowest fares per month."),
                    ("flexible_dates", "Search flexible travel dates along a route. Fares three days before, after."),
                ],
            },
            ServerSpec {
                id: "airline-booking",
                is_real: false,
                description: "Airline ticketing: book a flight ticket, cancel a flight ticket and select a seat aboard a booked flight.",
                tools: &[
                    ("book_ticket", "Book a flight ticket. E-ticket, confirmation code."),
                    ("cancel_ticket", "Cancel a flight ticket. Refund, change penalties."),
                    ("select_seat", "Select a seat aboard a booked flight. Aisle, window, exit row seats."),
                ],
            },
            ServerSpec {
                id: "airport-info",
                is_real: false,
                description: "Airport guide: check current delays at an airport and find airport lounges inside a terminal.",
                tools: &[
                    ("airport_delays", "Check current delays at an airport. Security wait times, runway closures."),
                    ("airport_lounges", "Find airport lounges inside a terminal. Lounge access rules, day pass prices."),
                ],
            },
            ServerSpec {
                id: "baggage",
                is_real: false,
                description: "Luggage help: check an airline baggage allowance and file a lost baggage claim.",
                tools: &[
                    ("baggage_allowance", "Check an airline baggage allowance. Checked bags, carry-on size limits."),
                    ("lost_baggage_claim", "File a lost baggage claim. Tracks delayed luggage, missing luggage."),
                ],
            },
            ServerSpec {
                id: "flight-tracker",
                is_real: true,
                description: "Live aircraft tracking: track live aircraft positions over a map and show an airport arrivals board.",
                tools: &[
                    ("track_aircraft", "Track live aircraft positions over a map. Altitude, speed, heading."),
                    ("arrivals_board", "Show an airport arrivals board. Landed flights, expected flights."),
                ],
            },
            ServerSpec {
                id: "miles",
                is_real: false,
                description: "Frequent flyer programs: check a frequent flyer miles balance and search award flights bookable with miles.",
                tools: &[
                    ("miles_balance", "Check a frequent flyer miles balance. Elite status, expiring miles."),
                    ("award_search", "Search award flights bookable with miles. Saver award seats."),
                ],
            },
        ],
    },
    TopicSpec {
        name: "desktop",
        base_latency_s: 0.4,
        servers: &[
            ServerSpec {
                id: "filesystem",
                is_real: true,
                description: "Local filesystem access: read file contents, write text into a file and list directory contents.",
                tools: &[
                    ("read_file", "Read file contents. Returns stored text given a path."),
                    ("write_file", "Write text into a file. Creates or overwrites documents."),
                    ("list_directory", "List directory contents. Files, subdirectories, sizes."),
                ],
            },
            ServerSpec {
                id: "system-monitor",
                is_real: false,
                description: "System monitoring: report RAM usage, memory pressure, CPU load per core and free disk space per volume.",
                tools: &[
                    ("memory_usage", "Report RAM usage, memory pressure. Processes using most memory."),
                    ("cpu_load", "Report CPU load per core. Processor utilization, temperature."),
                    ("disk_space", "Report free disk space per volume. Warns when storage fills."),
                ],
            },
            ServerSpec {
                id: "screenshot",
                is_real: false,
                description: "Screen capture: take a screenshot showing a screen or window and record the screen as video. Screen recording.",
                tools: &[
                    ("take_screenshot", "Take a screenshot showing a screen or window. Saves PNG images."),
                    ("screen_recording", "Record the screen as video. Screen recording, audio, cursor."),
                ],
            },
            ServerSpec {
                id: "app-launcher",
                is_real: false,
                description: "Application control: open a desktop application given its name and quit a running application.",
                tools: &[
                    ("open_application", "Open a desktop application given its name. Launches apps, brings them forward."),
                    ("quit_application", "Quit a running application. Force closes frozen apps."),
                ],
            },
            ServerSpec {
                id: "clipboard",
                is_real: false,
                description: "Clipboard manager: show clipboard history and copy text onto the clipboard.",
                tools: &[
                    ("clipboard_history", "Show clipboard history. Recently copied snippets."),
                    ("copy_to_clipboard", "Copy text onto the clipboard. Replaces current clipboard content."),
                ],
            },
            ServerSpec {
                id: "email-client",
                is_real: false,
                description: "Desktop email client: send an email message and search email inbox messages.",
                tools: &[
                    ("send_email", "Send an email message. Recipients, subject, attachments."),
                    ("search_inbox", "Search email inbox messages. Sender, subject, keyword filters."),
                ],
            },
            ServerSpec {
                id: "file-search",
                is_real: false,
                description: "Desktop file search: find files matching a name pattern and find largest files.",
                tools: &[
                    ("find_files", "Find files matching a name pattern. Recursive disk search."),
                    ("large_files", "Find largest files. Disk hogs, sizes, frees storage."),
                ],
            },
        ],
    },
    TopicSpec {
        name: "weather",
        base_latency_s: 0.6,
        servers: &[
            ServerSpec {
                id: "weather",
                is_real: true,
                description: "Weather service: get a multi-day weather forecast and get current weather conditions.",
                tools: &[
                    ("forecast", "Get a multi-day weather forecast. Daily high, low temperature, rain chance."),
                    ("current_conditions", "Get current weather conditions. Temperature, humidity, wind at present."),
                ],
            },
            ServerSpec {
                id: "hourly-weather",
                is_real: false,
                description: "Short-term forecasting: get an hourly weather forecast and predict rain or snow within minutes. Precipitation nowcast.",
                tools: &[
                    ("hourly_forecast", "Get an hourly weather forecast. Temperature, rain per hour."),
                    ("precipitation_nowcast", "Predict rain or snow within minutes. Minute-by-minute precipitation nowcast."),
                ],
            },
            ServerSpec {
                id: "weather-alerts",
                is_real: true,
                description: "Severe weather alerts: list regional severe weather alerts and track a hurricane or tropical storm. Hurricane tracker.",
                tools: &[
                    ("severe_alerts", "List regional severe weather alerts. Storm, flood, heat warnings."),
                    ("hurricane_tracker", "Track a hurricane or tropical storm. Storm tracker, projected path, wind speed."),
                ],
            },
            ServerSpec {
                id: "air-quality",
                is_real: false,
                description: "Air quality monitoring: get air quality index readings and get pollen count levels.",
                tools: &[
                    ("air_quality_index", "Get air quality index readings. PM2.5, ozone, pollutant levels."),
                    ("pollen_count", "Get pollen count levels. Tree, grass, ragweed allergy risk."),
                ],
            },
            ServerSpec {
                id: "marine-weather",
                is_real: false,
                description: "Marine conditions: get a coastal marine forecast and get high or low tide times at a harbor.",
                tools: &[
                    ("marine_forecast", "Get a coastal marine forecast. Wave height, swell, sea wind."),
                    ("tide_times", "Get high or low tide times at a harbor. Tide tables."),
                ],
            },
            ServerSpec {
                id: "climate-history",
                is_real: false,
                description: "Climate records: retrieve historical weather observations given a past date and get monthly climate averages.",
                tools: &[
                    ("historical_weather", "Retrieve historical weather observations given a past date. Recorded temperature, rainfall."),
                    ("climate_averages", "Get monthly climate averages. Typical temperature, rainfall per month."),
                ],
            },
            ServerSpec {
                id: "sun-uv",
                is_real: false,
                description: "Sun and UV: get a UV index reading and get sunrise or sunset.",
                tools: &[
                    ("uv_index", "Get a UV index reading. Sunburn risk, sunscreen advice."),
                    ("sunrise_sunset", "Get sunrise or sunset. Golden hour, day length."),
                ],
            },
        ],
    },
];
