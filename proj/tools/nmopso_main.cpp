#include "nmopso/cli.hpp"

int main(int argc, char** argv) {
    return nmopso::cli::run(argc, argv);
}
