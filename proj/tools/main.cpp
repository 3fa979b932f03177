#include "reprosolve/cli_app.hpp"

int main(int argc, char** argv) { return reprosolve::cli_main(argc, argv); }
