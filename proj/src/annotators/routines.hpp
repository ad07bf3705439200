#pragma once

#include <string>
#include <vector>

#include "framework/module.hpp"

namespace newsdesk {

// The text an annotator should look at: the scraped full text when present,
// otherwise headline plus description.
std::string item_text(const Item& item);

// Builds the processing routine a settings file asks for via params.routine.
// Resource files (lexicons, models, gazetteers) named in the params are
// loaded eagerly, so a bad path fails at registration, not mid-run.
//
// Routines: scrape, language, translate, features, mood, sentiment,
// readability, topic, geocode, popularity.
Routine make_routine(const ModuleSpec& spec);

std::vector<std::string> builtin_routines();

}  // namespace newsdesk
