#include <cstdio>

int main() {
    std::puts("specedge: CLI wired up later in the build");
    return 0;
}
