// regenerates the bundled synthetic corpus under a target directory
#include <iostream>

#include "cqsr/corpus.hpp"

int main(int argc, char** argv) {
    const std::string dir = (argc > 1) ? argv[1] : "data/corpus";
    cqsr::corpus::write_desk_corpus(dir);
    std::cout << "wrote corpus to " << dir << "\n";
    return 0;
}
