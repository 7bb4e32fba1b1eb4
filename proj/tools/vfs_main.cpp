#include "vfs/shell.hpp"

int main(int argc, char** argv) { return vfs::run_cli(argc, argv); }
