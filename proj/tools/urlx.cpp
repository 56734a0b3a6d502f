#include "urlx/cli.hpp"

int main(int argc, char** argv) { return urlx::cli::run(argc, argv); }
