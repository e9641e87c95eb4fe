#include <cstdio>
#include <string>

#include "sample_data.hpp"

// Regenerates the synthetic input fixtures shipped under data/sample.
int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data/sample";
    int days = argc > 2 ? std::atoi(argv[2]) : 10;
    const auto config = flexdes::test::write_sample_inputs(dir, {.days = days, .seed = 2024});
    std::printf("wrote %s\n", config.c_str());
    return 0;
}
