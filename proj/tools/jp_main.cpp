#include <cstdio>

#include "jp/expansion.hpp"

int main() {
    std::puts("jp: not wired up yet");
    return 2;
}
