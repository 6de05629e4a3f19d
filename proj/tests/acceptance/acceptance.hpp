#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace acceptance {

struct Criterion {
    int number;
    std::string group;
    std::string description;
    std::function<bool(std::ostream&)> run;
};

std::vector<Criterion>& registry();

struct Register {
    Register(int number, std::string group, std::string description,
             std::function<bool(std::ostream&)> run);
};

}  // namespace acceptance
