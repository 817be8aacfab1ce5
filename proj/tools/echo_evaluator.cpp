// Reference evaluator for the external-source protocol.
//
// Source s returns sum(x) + (s - 1) * offset. Flags:
//   --dims N         advertised dimensionality (default 2)
//   --costs a,b,...  advertised nominal costs (default 10,1)
//   --offset v       per-source bias (default 0)
//   --fail-after k   answer the first k eval requests, then reply with an error
//   --garbage-after k  same, but reply with a malformed line
//   --exit-after k   same, but exit without replying

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "misoagp/errors.hpp"
#include "misoagp/sources.hpp"

int main(int argc, char** argv) {
    CLI::App app{"echo evaluator for the misoagp source protocol"};
    std::size_t dims = 2;
    std::string costs_arg = "10,1";
    double offset = 0.0;
    long fail_after = -1, garbage_after = -1, exit_after = -1;
    app.add_option("--dims", dims);
    app.add_option("--costs", costs_arg);
    app.add_option("--offset", offset);
    app.add_option("--fail-after", fail_after);
    app.add_option("--garbage-after", garbage_after);
    app.add_option("--exit-after", exit_after);
    CLI11_PARSE(app, argc, argv);

    misoagp::protocol::Hello hello;
    hello.name = "echo";
    hello.dims = dims;
    std::stringstream ss(costs_arg);
    std::string item;
    int id = 1;
    while (std::getline(ss, item, ',')) hello.sources.push_back({id++, std::stod(item)});

    long served = 0;
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        std::string reply;
        try {
            const auto req = misoagp::protocol::parse_request(line);
            if (req.op == "hello") {
                reply = misoagp::protocol::hello_reply(hello);
            } else {
                if (exit_after >= 0 && served >= exit_after) return 1;
                if (garbage_after >= 0 && served >= garbage_after) {
                    std::cout << "this is not json" << std::endl;
                    ++served;
                    continue;
                }
                if (fail_after >= 0 && served >= fail_after) {
                    reply = misoagp::protocol::error_reply("configured failure");
                } else if (static_cast<std::size_t>(req.x.size()) != dims) {
                    reply = misoagp::protocol::error_reply("wrong dimension");
                } else if (req.source < 1 || req.source > static_cast<int>(hello.sources.size())) {
                    reply = misoagp::protocol::error_reply("unknown source");
                } else {
                    reply = misoagp::protocol::eval_reply(req.x.sum() + (req.source - 1) * offset, 0.0);
                }
                ++served;
            }
        } catch (const misoagp::Error& e) {
            reply = misoagp::protocol::error_reply(e.what());
        }
        std::cout << reply << std::endl;
    }
    return 0;
}
