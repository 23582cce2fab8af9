#include <cstdlib>
#include <iostream>

#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli/run.hpp"

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("depq");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("DEPQ_LOG")) spdlog::cfg::helpers::load_levels(level);

  return depq::cli::run(argc, argv, std::cout, std::cerr);
}
