#include <iostream>

#include "hdgi/cli.hpp"

int main(int argc, char** argv) {
  hdgi::cli::RunConfig config;
  if (auto code = hdgi::cli::parse(argc, argv, config, std::cout, std::cerr)) return *code;
  return hdgi::cli::run(config, std::cout, std::cerr);
}
