#include <iostream>

#include "acceptance.hpp"

int main() { return mk::run_acceptance(std::cout) ? 0 : 1; }
