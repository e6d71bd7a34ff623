#include "frlsc_app.hpp"

int main(int argc, char** argv) { return frlsc::cli::run(argc, argv); }
