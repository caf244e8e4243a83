#include <cstdio>

int main() {
  std::puts("hypeval: subcommands not wired up yet");
  return 0;
}
