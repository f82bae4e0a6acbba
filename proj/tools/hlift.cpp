#include "hlift/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hlift::cli::run(args, std::cout, std::cerr);
}
