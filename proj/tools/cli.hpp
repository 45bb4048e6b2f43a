#pragma once

#include <ostream>

#include <json.hpp>

#include "ellipcmr/perturbative.hpp"

namespace ellipcmr::cli {

// 0 ok, 1 certificate failed, 2 usage error, 3 module error
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

nlohmann::ordered_json table_to_json(const PSeriesTable& t);
PSeriesTable table_from_json(const nlohmann::ordered_json& j);

// ELLIPCMR_THREADS, else hardware concurrency, at least 1
unsigned thread_count();

} // namespace ellipcmr::cli
