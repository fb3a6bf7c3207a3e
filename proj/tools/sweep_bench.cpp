#include <cstdio>

int main() {
    std::puts("sweep bench placeholder");
    return 0;
}
