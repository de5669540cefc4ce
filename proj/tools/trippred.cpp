#include "trippred/trippred.hpp"

int main() { return 0; }
