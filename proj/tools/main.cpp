#include <string>
#include <vector>

#include "ionsynth/cli.hpp"

int main(int argc, char** argv) {
    return ionsynth::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
