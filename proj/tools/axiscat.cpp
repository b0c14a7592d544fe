#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    for (const auto& a : args)
        if (a == "--help" || a == "-h")
        {
            std::cout << "axiscat --study {radial|angular|flt-accuracy|flt-timing|single} [options]\n"
                         "  --scatterer {sphere|offset-sphere|hollowed|vacuum|tabulated}  --table FILE\n"
                         "  --F LIST  --Ni LIST  --Nd N  --k K  --beta B  --rmax R  --tol T  --F-ref F\n"
                         "  --sizes LIST  --repeats N  --raster-theta N  --out FILE  --raster FILE\n"
                         "  --moment-cache DIR  --threads N  --rerun CSV\n"
                         "Lists are comma separated. Exit status: 0 ok, 1 solve failure, 2 usage error.\n";
            return 0;
        }
    return axiscat::cli::run(args, std::cout, std::cerr);
}
