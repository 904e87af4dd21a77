#include <oge/cli.hpp>

#include <iostream>

int main (int argc, char ** argv)
{
	return oge::run_cli (argc, argv, std::cout, std::cerr);
}
