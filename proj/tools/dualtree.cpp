#include <cstdio>
int main() { std::puts("cli: pending"); return 1; }
