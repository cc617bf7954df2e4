#include "shellspec/cli.hpp"

int main(int argc, char** argv) {
  return shellspec::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
