#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <memory>
#include <random>

#include <json.hpp>

#include "misoagp/errors.hpp"
#include "misoagp/sources.hpp"
#include "support.hpp"

using namespace misoagp;
using namespace std::chrono_literals;

namespace {

RawPoint pt(std::initializer_list<double> v) {
    RawPoint x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double e : v) x[i++] = e;
    return x;
}

std::shared_ptr<ExternalEvaluator> echo(std::vector<std::string> extra = {}) {
    std::vector<std::string> cmd{MISOAGP_ECHO_EVALUATOR};
    cmd.insert(cmd.end(), extra.begin(), extra.end());
    return std::make_shared<ExternalEvaluator>(cmd, 5000ms);
}

}  // namespace

TEST_CASE("analytic source evaluates its function and reports zero cost") {
    AnalyticSource s([](const RawPoint& x) { return x.squaredNorm(); }, 3.0);
    const auto e = s.evaluate(pt({1.0, 2.0}));
    CHECK(e.y == 5.0);
    CHECK(e.actual_cost == 0.0);
    CHECK(s.cost() == 3.0);
    CHECK(s.kind() == SourceKind::analytic);
}

TEST_CASE("analytic noise is reproducible per point and seed") {
    AnalyticSource a([](const RawPoint&) { return 0.0; }, 1.0, 0.5, 7);
    AnalyticSource b([](const RawPoint&) { return 0.0; }, 1.0, 0.5, 7);
    AnalyticSource c([](const RawPoint&) { return 0.0; }, 1.0, 0.5, 8);
    CHECK(a.evaluate(pt({0.3})).y == a.evaluate(pt({0.3})).y);
    CHECK(a.evaluate(pt({0.3})).y == b.evaluate(pt({0.3})).y);
    CHECK(a.evaluate(pt({0.3})).y != c.evaluate(pt({0.3})).y);
    CHECK(a.evaluate(pt({0.3})).y != a.evaluate(pt({0.31})).y);

    // the draws look like N(0, 0.25)
    double sum = 0.0, sq = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        const double y = a.evaluate(pt({i / double(n)})).y;
        sum += y;
        sq += y * y;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(std::abs(sq / n - 0.25) < 0.03);
}

TEST_CASE("analytic source validation and non-finite values") {
    CHECK_THROWS_AS(AnalyticSource([](const RawPoint&) { return 0.0; }, 0.0), InvalidArgument);
    CHECK_THROWS_AS(AnalyticSource([](const RawPoint&) { return 0.0; }, 1.0, -1.0), InvalidArgument);
    AnalyticSource bad([](const RawPoint&) { return NAN; }, 1.0);
    CHECK_THROWS_AS(bad.evaluate(pt({0.1})), SourceEvaluationError);
}

TEST_CASE("biased quadratic with a = 0 makes both sources identical") {
    auto b = make_benchmark("biased-quadratic-2src", {{"a", 0.0}});
    REQUIRE(b.sources.size() == 2);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto x = testing_support::uniform_point(rng, 2);
        CHECK(b.sources[0]->evaluate(x).y == b.sources[1]->evaluate(x).y);
    }
    CHECK(b.sources[0]->evaluate(b.optimum).y == 0.0);
    CHECK(b.sources[0]->cost() == 10.0);
    CHECK(b.sources[1]->cost() == 1.0);
}

TEST_CASE("biased quadratic default bias") {
    auto b = make_benchmark("biased-quadratic-2src");
    const auto x = pt({0.2, 0.9});
    CHECK(b.sources[1]->evaluate(x).y - b.sources[0]->evaluate(x).y == doctest::Approx(0.05 * std::sin(2.0)));
    CHECK(b.space.dim() == 2);
    CHECK(make_benchmark("biased-quadratic-2src", {{"d", 4}}).space.dim() == 4);
}

TEST_CASE("forrester pair") {
    auto b = make_benchmark("forrester-2src");
    CHECK(b.sources[0]->evaluate(pt({0.757249})).y == doctest::Approx(-6.020740055735769).epsilon(1e-12));
    CHECK(b.optimum_value == doctest::Approx(-6.020740055735769).epsilon(1e-12));
    // grid check that the reported optimum is the global minimum
    double lo = INFINITY;
    for (int i = 0; i <= 100000; ++i) lo = std::min(lo, b.sources[0]->evaluate(pt({i / 100000.0})).y);
    CHECK(lo >= b.optimum_value - 1e-9);
    const double x = 0.3, f = b.sources[0]->evaluate(pt({x})).y;
    CHECK(b.sources[1]->evaluate(pt({x})).y == doctest::Approx(0.5 * f + 10.0 * (x - 0.5) - 5.0));
}

TEST_CASE("region-biased pair is accurate only near the optimum") {
    auto b = make_benchmark("region-biased-2src");
    const auto gap = [&](double x) { return b.sources[1]->evaluate(pt({x})).y - b.sources[0]->evaluate(pt({x})).y; };
    CHECK(gap(0.7) == 0.0);
    CHECK(gap(0.72) < 0.02);
    CHECK(gap(0.1) == doctest::Approx(0.5 * (1.0 - std::exp(-0.36 / 0.02))));
    CHECK(gap(0.1) > 0.49);
}

TEST_CASE("benchmark registry") {
    for (const auto& name : benchmark_names()) {
        CHECK_FALSE(benchmark_description(name).empty());
        CHECK(make_benchmark(name).sources.size() == 2);
    }
    CHECK_THROWS_AS(make_benchmark("nope"), InvalidArgument);
    CHECK_THROWS_AS(make_benchmark("forrester-2src", {{"d", 2}}), InvalidArgument);
    CHECK_THROWS_AS(make_benchmark("region-biased-2src", {{"width", 0.0}}), InvalidArgument);
}

TEST_CASE("protocol messages round trip") {
    const auto req = protocol::parse_request(protocol::eval_request(pt({0.25, -3.5}), 2));
    CHECK(req.op == "eval");
    CHECK(req.source == 2);
    CHECK(req.x == pt({0.25, -3.5}));
    CHECK(protocol::parse_request(protocol::hello_request()).op == "hello");

    const auto wire = nlohmann::json::parse(protocol::eval_request(pt({1.0}), 1));
    CHECK(wire["op"] == "eval");
    CHECK(wire["source"] == 1);
    CHECK(wire["x"].size() == 1);

    protocol::Hello h{"svm", {{1, 320.0}, {2, 1.0}}, 2};
    const auto back = protocol::parse_hello(protocol::hello_reply(h));
    CHECK(back.name == "svm");
    CHECK(back.dims == 2);
    REQUIRE(back.sources.size() == 2);
    CHECK(back.sources[0].cost == 320.0);
    CHECK(back.sources[1].id == 2);

    const auto e = protocol::parse_eval_reply(protocol::eval_reply(0.125, 4.5));
    CHECK(e.y == 0.125);
    CHECK(e.actual_cost == 4.5);
    CHECK(protocol::parse_eval_reply(R"({"y": 2})").actual_cost < 0.0);  // measured by the caller
}

TEST_CASE("protocol rejects malformed and error messages") {
    CHECK_THROWS_AS(protocol::parse_eval_reply("not json"), SourceEvaluationError);
    CHECK_THROWS_AS(protocol::parse_eval_reply("[1, 2]"), SourceEvaluationError);
    CHECK_THROWS_AS(protocol::parse_eval_reply(R"({"cost_seconds": 1})"), SourceEvaluationError);
    CHECK_THROWS_AS(protocol::parse_eval_reply(R"({"y": "3"})"), SourceEvaluationError);
    CHECK_THROWS_AS(protocol::parse_hello(R"({"name": "x"})"), SourceEvaluationError);
    CHECK_THROWS_AS(protocol::parse_request(R"({"op": "dance"})"), SourceEvaluationError);
    CHECK_THROWS_AS(protocol::parse_request(R"({"op": "eval", "x": [1]})"), SourceEvaluationError);
    try {
        protocol::parse_eval_reply(protocol::error_reply("disk full"));
        FAIL("expected an error");
    } catch (const SourceEvaluationError& err) {
        CHECK(std::string(err.what()).find("disk full") != std::string::npos);
        CHECK(err.output().find("disk full") != std::string::npos);
    }
}

TEST_CASE("echo evaluator round trip") {
    auto ev = echo({"--offset", "0.5"});
    CHECK(ev->hello().name == "echo");
    CHECK(ev->hello().dims == 2);
    REQUIRE(ev->hello().sources.size() == 2);
    CHECK(ev->hello().sources[0].cost == 10.0);

    ExternalSource s1(ev, 1, 10.0), s2(ev, 2, 1.0);
    CHECK(s1.kind() == SourceKind::external);
    const auto e = s1.evaluate(pt({0.25, 0.5}));
    CHECK(e.y == 0.75);
    CHECK(e.actual_cost == 0.0);  // the evaluator reports its own cost
    CHECK(s2.evaluate(pt({0.25, 0.5})).y == 1.25);
    for (int i = 0; i < 100; ++i) CHECK(s1.evaluate(pt({i * 0.01, 1.0})).y == doctest::Approx(i * 0.01 + 1.0));

    // evaluator-side validation comes back as an error reply
    CHECK_THROWS_AS(s1.evaluate(pt({0.1})), SourceEvaluationError);
    ExternalSource s3(ev, 3, 1.0);
    CHECK_THROWS_AS(s3.evaluate(pt({0.1, 0.1})), SourceEvaluationError);
    CHECK(s1.evaluate(pt({0.1, 0.2})).y == doctest::Approx(0.3));  // still usable afterwards
}

TEST_CASE("echo evaluator failure modes") {
    SUBCASE("error reply") {
        ExternalSource s(echo({"--fail-after", "2"}), 1, 1.0);
        CHECK_NOTHROW(s.evaluate(pt({0.0, 0.0})));
        CHECK_NOTHROW(s.evaluate(pt({0.0, 0.0})));
        CHECK_THROWS_WITH_AS(s.evaluate(pt({0.0, 0.0})), doctest::Contains("configured failure"),
                             SourceEvaluationError);
    }
    SUBCASE("malformed reply") {
        ExternalSource s(echo({"--garbage-after", "1"}), 1, 1.0);
        CHECK_NOTHROW(s.evaluate(pt({0.0, 0.0})));
        try {
            s.evaluate(pt({0.0, 0.0}));
            FAIL("expected an error");
        } catch (const SourceEvaluationError& err) {
            CHECK(err.output() == "this is not json");
        }
    }
    SUBCASE("evaluator exits") {
        ExternalSource s(echo({"--exit-after", "0"}), 1, 1.0);
        CHECK_THROWS_AS(s.evaluate(pt({0.0, 0.0})), SourceEvaluationError);
    }
    SUBCASE("missing executable") {
        CHECK_THROWS_AS(ExternalEvaluator({"/nonexistent/evaluator"}, 1000ms), SourceEvaluationError);
    }
}
