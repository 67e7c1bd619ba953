#include <string>
#include <vector>

#include "dpgan/app/commands.hpp"

int main(int argc, char** argv) {
  return dpgan::app::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
