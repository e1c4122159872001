#include <iostream>

#include "pagesift/app.hpp"

int main(int argc, char** argv) { return pagesift::app::run(argc, argv, std::cout, std::cerr); }
