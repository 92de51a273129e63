#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "relect/cli.hpp"
#include "relect/errors.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const relect::CliConfig config = relect::parse_args(args);
        return relect::execute(config);
    } catch (const relect::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
