#include "osbk_app/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return osbk::app::main_cli(argc, argv, std::cout, std::cerr); }
