#include <iostream>

#include "sfwm/app/commands.hpp"

int main(int argc, char** argv)
{
    return sfwm::app::run(argc, argv, std::cout, std::cerr);
}
