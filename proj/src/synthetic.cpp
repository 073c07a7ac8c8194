// Copyright 2026 The clickbait-hybrid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clickbait/synthetic.hpp"

#include <array>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "clickbait/error.hpp"
#include "clickbait/rng.hpp"

namespace clickbait {

namespace {

using Words = std::vector<std::string_view>;

const Words kCelebrities = {"This Celebrity", "Taylor Swift", "Kanye West", "This Reality Star", "Beyonce",
                            "Justin Bieber", "Kim Kardashian", "This Famous Chef", "This Pop Star",
                            "Your Favorite Actor", "This Former Child Star", "Ryan Gosling"};
const Words kPeople = {"Mom", "Teenager", "Dog", "Grandma", "Teacher", "Cat", "Dad", "Toddler", "Waiter",
                       "Couple", "Student", "Stranger"};
const Words kThings = {"Things", "Photos", "Secrets", "Tricks", "Signs", "Facts", "Moments", "Hacks",
                       "Pictures", "Struggles", "Reasons", "Tweets"};
const Words kFeelings = {"Cry", "Laugh Out Loud", "Cringe", "Question Everything", "Feel Old", "Smile",
                         "Scream", "Lose Your Mind", "Gasp", "Feel Nostalgic"};
const Words kActivities = {"Eat Pizza", "Go To Sleep", "Drink Coffee", "Use Your Phone", "Take A Selfie",
                           "Go Shopping", "Wash Your Hair", "Open The Fridge", "Go To The Gym",
                           "Check Instagram"};
const Words kPlaces = {"The Attic", "Her Backyard", "A Thrift Store", "The Basement", "His Garage",
                       "An Old Box", "The Couch", "The Ocean", "A Cereal Box", "The Closet"};
const Words kVenues = {"Oscars", "Airport", "Grocery Store", "Met Gala", "Beach", "Wedding", "Gym",
                        "Concert", "Dentist", "Zoo"};
const Words kReactions = {"Amazing", "Hilarious", "Heartbreaking", "Insane", "Adorable", "Shocking",
                          "Incredible", "Unbelievable", "Too Cute", "Mind Blowing"};

const Words kAgencies = {"Government", "Central Bank", "Ministry Of Health", "Statistics Office",
                         "European Commission", "World Bank", "Census Bureau", "Energy Agency",
                         "Treasury", "Labor Department", "Transport Authority", "Environment Agency"};
const Words kSectors = {"Solar", "Wind Power", "Electric Vehicle", "Broadband", "Rail Freight",
                        "Vaccine", "Manufacturing", "Housing", "Steel", "Wheat", "Coal", "Tourism"};
const Words kRegions = {"Europe", "Asia", "Latin America", "Canada", "Germany", "Japan", "India", "Brazil",
                        "Australia", "Kenya", "Norway", "Mexico"};
const Words kCompanies = {"Siemens", "Toyota", "Unilever", "Samsung", "Nestle", "Boeing", "Shell", "Intel",
                          "Pfizer", "Volvo", "Airbus", "Philips"};
const Words kCities = {"Berlin", "Chicago", "Madrid", "Toronto", "Osaka", "Nairobi", "Lyon", "Denver",
                       "Melbourne", "Oslo", "Seattle", "Lisbon"};
const Words kInfrastructure = {"Light Rail", "Bike Lanes", "Water Treatment", "Bus Service",
                               "Public Housing", "Flood Defenses", "Hospital Capacity", "Road Repairs",
                               "School Buildings", "Power Grid"};
const Words kDirections = {"Increase", "Decline", "Rise", "Drop", "Growth", "Fall"};
const Words kMovements = {"Rise", "Fall", "Climb", "Slip", "Gain", "Drop"};
const Words kQuarters = {"First", "Second", "Third", "Fourth"};

class Filler {
 public:
  explicit Filler(std::uint64_t seed) : rng_(seed) {}

  std::string pick(const Words& words) { return std::string(words[uniform_index(rng_, words.size())]); }
  std::string number(int lo, int hi) {
    return std::to_string(lo + static_cast<int>(uniform_index(rng_, static_cast<std::uint64_t>(hi - lo + 1))));
  }
  std::size_t choose(std::size_t n) { return static_cast<std::size_t>(uniform_index(rng_, n)); }

 private:
  std::mt19937_64 rng_;
};

std::string clickbait_headline(Filler& f) {
  switch (f.choose(10)) {
    case 0: return "You Won't Believe What " + f.pick(kCelebrities) + " Did At The " + f.pick(kVenues) + "!";
    case 1: return f.number(7, 31) + " " + f.pick(kThings) + " That Will Make You " + f.pick(kFeelings);
    case 2: return "This " + f.pick(kPeople) + " Tried To " + f.pick(kActivities) + " And What Happened Next Is " +
                   f.pick(kReactions);
    case 3: return "Here's Why " + f.pick(kCelebrities) + " Is Suddenly Everywhere";
    case 4: return "You'll Never Guess What This " + f.pick(kPeople) + " Found In " + f.pick(kPlaces);
    case 5: return f.number(5, 25) + " Reasons Why You Should Never " + f.pick(kActivities) + " Again";
    case 6: return "What " + f.pick(kCelebrities) + " Said About " + f.pick(kThings) + " Will Make You " +
                   f.pick(kFeelings);
    case 7: return "Only People Who " + f.pick(kActivities) + " Will Understand These " + f.number(9, 29) + " " +
                   f.pick(kThings);
    case 8: return "This " + f.pick(kPeople) + "'s Reaction Is So " + f.pick(kReactions) + " You Need To See It";
    default: return "We Need To Talk About These " + f.number(10, 40) + " " + f.pick(kReactions) + " " +
                    f.pick(kThings);
  }
}

std::string factual_headline(Filler& f) {
  switch (f.choose(8)) {
    case 0: return "Study Finds " + f.number(2, 48) + "% " + f.pick(kDirections) + " In " + f.pick(kSectors) +
                   " Adoption Across " + f.pick(kRegions);
    case 1: return f.pick(kAgencies) + " Reports " + f.number(2, 19) + "." + f.number(0, 9) + "% " +
                   f.pick(kDirections) + " In " + f.pick(kSectors) + " Output";
    case 2: return f.pick(kCompanies) + " Shares " + f.pick(kMovements) + " " + f.number(1, 14) +
                   "% After " + f.pick(kQuarters) + " Quarter Earnings";
    case 3: return f.pick(kCities) + " Council Approves " + f.number(12, 950) + " Million Budget For " +
                   f.pick(kInfrastructure);
    case 4: return f.pick(kRegions) + " " + f.pick(kSectors) + " Exports " + f.pick(kMovements) + " " +
                   f.number(2, 30) + "% In " + f.number(2015, 2024);
    case 5: return f.pick(kAgencies) + " Raises " + f.number(2015, 2025) + " Forecast For " + f.pick(kSectors) +
                   " Investment In " + f.pick(kRegions);
    case 6: return f.pick(kCompanies) + " To Cut " + f.number(200, 9000) + " Jobs In " + f.pick(kRegions) +
                   " Restructuring";
    default: return f.pick(kCities) + " Opens " + f.number(3, 60) + " Kilometer Extension Of " +
                    f.pick(kInfrastructure) + " Network";
  }
}

}  // namespace

LabeledCorpus synthesize_corpus(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw PreconditionError("synthetic corpus needs at least 2 headlines");
  Filler filler(splitmix64(seed));
  std::unordered_set<std::string> seen;
  std::vector<HeadlineRecord> records;
  records.reserve(n);
  const std::size_t max_attempts = 200 * n;
  std::size_t attempts = 0;
  // Alternating labels keeps both classes spread through the corpus order.
  while (records.size() < n) {
    if (++attempts > max_attempts) {
      throw PreconditionError("synthetic templates cannot produce " + std::to_string(n) + " distinct headlines");
    }
    const int label = records.size() % 2 == 0 ? 1 : 0;
    std::string text = label == 1 ? clickbait_headline(filler) : factual_headline(filler);
    if (!seen.insert(normalize_text(text)).second) continue;
    HeadlineRecord r;
    r.id = "syn-" + std::to_string(records.size());
    r.text = std::move(text);
    r.label = label;
    r.source = Source::kSynthetic;
    records.push_back(std::move(r));
  }
  return LabeledCorpus(std::move(records), seed);
}

}  // namespace clickbait
