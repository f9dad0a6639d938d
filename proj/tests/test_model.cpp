#include "doctest.h"
#include "sunfact/model.hpp"

#include <cmath>
#include <map>

using namespace sunfact;

TEST_CASE("graph weights: ring, chain, all_to_all") {
    CouplingGraph ring = make_graph(GraphKind::ring_first_neighbor, 4);
    CHECK(ring.r(0, 1) == doctest::Approx(0.5));
    CHECK(ring.r(0, 3) == doctest::Approx(0.5));
    CHECK(ring.r(0, 2) == 0.0);
    CHECK(ring.r_row(0) == doctest::Approx(1.0));
    CHECK(ring.r_total == doctest::Approx(4.0));

    CouplingGraph pair = make_graph(GraphKind::ring_first_neighbor, 2);
    CHECK(pair.r(0, 1) == doctest::Approx(1.0));
    CHECK(pair.r_total == doctest::Approx(2.0));

    CouplingGraph chain = make_graph(GraphKind::open_chain, 4);
    CHECK(chain.r(0, 3) == 0.0);
    CHECK(chain.r_row(0) == doctest::Approx(0.5));
    CHECK(chain.r_row(1) == doctest::Approx(1.0));

    CouplingGraph full = make_graph(GraphKind::all_to_all, 3);
    CHECK(full.r(0, 1) == doctest::Approx(0.5));
    CHECK(full.r(0, 2) == doctest::Approx(0.5));
    CHECK(full.r_row(0) == doctest::Approx(1.0));
}

TEST_CASE("custom graph validation") {
    MatrixXd bad = MatrixXd::Zero(3, 3);
    bad(0, 1) = 1.0;  // asymmetric
    CHECK_THROWS_AS(make_graph(GraphKind::custom, 3, bad), ConfigError);

    MatrixXd neg = MatrixXd::Zero(3, 3);
    neg(0, 1) = neg(1, 0) = -1.0;
    CHECK_THROWS_AS(make_graph(GraphKind::custom, 3, neg), ConfigError);

    MatrixXd diag = MatrixXd::Zero(3, 3);
    diag(1, 1) = 2.0;
    CHECK_THROWS_AS(make_graph(GraphKind::custom, 3, diag), ConfigError);

    MatrixXd ok = MatrixXd::Zero(3, 3);
    ok(0, 1) = ok(1, 0) = 0.7;
    ok(1, 2) = ok(2, 1) = 0.3;
    CouplingGraph g = make_graph(GraphKind::custom, 3, ok);
    CHECK(g.r_row(1) == doctest::Approx(1.0));
}

TEST_CASE("bipartite detection") {
    CHECK(make_graph(GraphKind::ring_first_neighbor, 4).bipartite());
    CHECK_FALSE(make_graph(GraphKind::ring_first_neighbor, 5).bipartite());
    CHECK(make_graph(GraphKind::open_chain, 5).bipartite());
    CHECK_FALSE(make_graph(GraphKind::all_to_all, 3).bipartite());
}

static ModelSpec tiny_spec() {
    VectorXd eps(2);
    eps << -0.3, 0.4;
    MatrixXd U = MatrixXd::Zero(2, 2), V = MatrixXd::Zero(2, 2),
             W = MatrixXd::Zero(2, 2);
    V(0, 1) = V(1, 0) = 0.2;
    W(0, 1) = W(1, 0) = 0.5;
    return make_spec(2, 2, eps, U, V, W,
                     make_graph(GraphKind::ring_first_neighbor, 2));
}

TEST_CASE("spec validation rejects bad inputs by name") {
    ModelSpec s = tiny_spec();
    CHECK_NOTHROW(s.validate());

    ModelSpec asym = s;
    asym.V(0, 1) = 0.9;
    try {
        asym.validate();
        CHECK(false);
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("V") != std::string::npos);
        CHECK(msg.find("(1,2)") != std::string::npos);
    }

    ModelSpec vdiag = s;
    vdiag.V(1, 1) = 1.0;
    CHECK_THROWS_AS(vdiag.validate(), ConfigError);

    ModelSpec nan = s;
    nan.epsilon(0) = std::nan("");
    CHECK_THROWS_AS(nan.validate(), ConfigError);

    ModelSpec szmis = s;
    szmis.graph = make_graph(GraphKind::ring_first_neighbor, 3);
    CHECK_THROWS_AS(szmis.validate(), ConfigError);
}

TEST_CASE("basis indexing round trip") {
    const int n = 3, N = 4;
    for (std::int64_t g = 0; g < pow_ll(n, N); ++g) {
        BasisConfig c = index_to_config(g, n, N);
        CHECK(config_to_index(c.levels, n) == g);
    }
    BasisConfig c = index_to_config(5, 3, 4);  // 5 = 2 + 1*3
    CHECK(c.levels == std::vector<int>{2, 1, 0, 0});
}

TEST_CASE("sector labels") {
    BasisConfig c = index_to_config(config_to_index({0, 1}, 2), 2, 2);
    SectorLabel parity = sector_of(c, 2, SectorKind::parity);
    CHECK(parity.parity == std::vector<int>{-1, -1});
    CHECK(parity.str() == "--");

    SectorLabel occ = sector_of(c, 2, SectorKind::occupation);
    CHECK(occ.occupation == std::vector<int>{1, 1});
    CHECK(occ.str() == "1,1");
}

TEST_CASE("parity sector sizes for n=3, N=4") {
    // brute-force census of the 81 configurations
    std::map<std::string, int> sizes;
    for (std::int64_t g = 0; g < pow_ll(3, 4); ++g)
        sizes[sector_of(index_to_config(g, 3, 4), 3, SectorKind::parity)
                  .str()]++;
    CHECK(sizes.size() == 4);
    CHECK(sizes["+++"] == 21);
    CHECK(sizes["+--"] == 20);
    CHECK(sizes["-+-"] == 20);
    CHECK(sizes["--+"] == 20);
}

TEST_CASE("json round trip") {
    ModelSpec s = tiny_spec();
    std::string text = spec_to_json(s);
    ModelSpec back = parse_spec_json(text);
    CHECK(back.n == s.n);
    CHECK(back.N == s.N);
    CHECK((back.epsilon - s.epsilon).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.V - s.V).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.W - s.W).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.graph.r - s.graph.r).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.edge_scaling == s.edge_scaling);
}

TEST_CASE("json parse errors") {
    CHECK_THROWS_AS(parse_spec_json("not json"), ConfigError);
    CHECK_THROWS_AS(parse_spec_json("{}"), ConfigError);
    CHECK_THROWS_AS(
        parse_spec_json(R"({"n":2,"N":2,"epsilon":[0,1],"graph":{"kind":"nope"}})"),
        ConfigError);
}
