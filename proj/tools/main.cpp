#include <string>
#include <vector>

#include "cfmetrics/cli.hpp"

int main(int argc, char** argv) {
  return cfmetrics::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
