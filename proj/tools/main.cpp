#include <cstdio>

int main() {
  std::puts("kgqa: cli not wired yet");
  return 1;
}
