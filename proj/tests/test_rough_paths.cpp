#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "helpers.hpp"
#include "roughflow/rough_path.hpp"

using namespace roughflow;

namespace {

const Signature kW2{AlgebraKind::word, "ab"};
const Signature kT2{AlgebraKind::tensor, "ab"};

PiecewiseLinearPath<Rational> sample_path() {
    // two-dimensional, three segments, rational knots
    return PiecewiseLinearPath<Rational>(
        {Rational(0), Rational(1, 3), Rational(1, 2), Rational(1)},
        {{Rational(0), Rational(0)},
         {Rational(1, 2), Rational(-1, 4)},
         {Rational(1, 3), Rational(1)},
         {Rational(2), Rational(1, 2)}});
}

PiecewiseLinearPath<Rational> random_rational_path(std::mt19937_64& rng, int knots, int dim) {
    std::uniform_int_distribution<int> num(-8, 8);
    std::vector<Rational> times;
    std::vector<std::vector<Rational>> values;
    for (int k = 0; k < knots; ++k) {
        times.push_back(Rational(k, knots - 1));
        std::vector<Rational> v;
        for (int i = 0; i < dim; ++i) v.push_back(Rational(num(rng), 4));
        values.push_back(std::move(v));
    }
    return PiecewiseLinearPath<Rational>(std::move(times), std::move(values));
}

Rational random_time(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(0, 24);
    return Rational(num(rng), 24);
}

// Independent level-2 oracle: sum over linear pieces of the exact iterated
// integral  x2_ij = sum_k [ (X_{u_k} - X_s)_i v_k,j + v_k,i v_k,j / 2 ].
Rational level2_integral(const PiecewiseLinearPath<Rational>& path, const Rational& s,
                         const Rational& t, int i, int j) {
    Rational acc(0);
    auto xs = path.value_at(s);
    for (const auto& [u, v] : path.pieces(s, t)) {
        auto xu = path.value_at(u);
        auto xv = path.value_at(v);
        Rational vi = xv[static_cast<std::size_t>(i)] - xu[static_cast<std::size_t>(i)];
        Rational vj = xv[static_cast<std::size_t>(j)] - xu[static_cast<std::size_t>(j)];
        acc += (xu[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(i)]) * vj;
        acc += vi * vj / 2;
    }
    return acc;
}

} // namespace

TEST_CASE("signature of a straight segment") {
    PiecewiseLinearPath<Rational> seg({Rational(0), Rational(1)},
                                      {{Rational(0), Rational(0)}, {Rational(3), Rational(-2)}});
    auto sig = path_signature(seg, kW2, 2, Rational(0), Rational(1));
    // 1 + v + v⊗v/2 for v = (3, -2)
    auto a = Word({0}), b = Word({1});
    CHECK(sig.coeff(Word::unit()) == 1);
    CHECK(sig.coeff(a) == 3);
    CHECK(sig.coeff(b) == -2);
    CHECK(sig.coeff(Word({0, 0})) == Rational(9, 2));
    CHECK(sig.coeff(Word({0, 1})) == -3);
    CHECK(sig.coeff(Word({1, 0})) == -3);
    CHECK(sig.coeff(Word({1, 1})) == 2);

    CHECK(path_signature(seg, kW2, 2, Rational(1, 2), Rational(1, 2)) ==
          WordElement<Rational>::unit(kW2, 2));
    CHECK_THROWS_AS(path_signature(seg, kW2, 2, Rational(1), Rational(0)), domain_error);
}

TEST_CASE("signature level 2 matches the symbolic iterated integral") {
    auto path = sample_path();
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 20; ++rep) {
        Rational s = random_time(rng), t = random_time(rng);
        if (t < s) std::swap(s, t);
        auto sig = path_signature(path, kW2, 2, s, t);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(sig.coeff(Word({static_cast<Letter>(i), static_cast<Letter>(j)})) ==
                      level2_integral(path, s, t, i, j));
    }
}

TEST_CASE("Chen relation is exact for rational data") {
    std::mt19937_64 rng(103);
    for (int rep = 0; rep < 25; ++rep) {
        auto path = random_rational_path(rng, 4, 2);
        std::uniform_int_distribution<std::uint32_t> pick_n(1, 4);
        const std::uint32_t n = pick_n(rng);
        std::array<Rational, 3> ts{random_time(rng), random_time(rng), random_time(rng)};
        std::sort(ts.begin(), ts.end());
        auto x_rs = path_signature(path, kW2, n, ts[0], ts[1]);
        auto x_st = path_signature(path, kW2, n, ts[1], ts[2]);
        auto x_rt = path_signature(path, kW2, n, ts[0], ts[2]);
        for (const auto& d : chen_defect(x_rs, x_st, x_rt)) CHECK(d == 0);
    }
}

TEST_CASE("signatures are weak geometric (log lies in the Lie span)") {
    std::mt19937_64 rng(107);
    for (std::uint32_t n = 1; n <= 4; ++n) {
        auto path = random_rational_path(rng, 3, 2);
        auto sig = path_signature(path, kW2, n, Rational(0), Rational(1));
        CHECK(lie_residual(log_truncated(sig)) == 0);
    }
}

TEST_CASE("level-2 symmetric part is half the square of level 1") {
    std::mt19937_64 rng(109);
    auto path = random_rational_path(rng, 4, 2);
    auto sig = path_signature(path, kW2, 2, Rational(0), Rational(1));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            auto xi = sig.coeff(Word({static_cast<Letter>(i)}));
            auto xj = sig.coeff(Word({static_cast<Letter>(j)}));
            auto sym = sig.coeff(Word({static_cast<Letter>(i), static_cast<Letter>(j)})) +
                       sig.coeff(Word({static_cast<Letter>(j), static_cast<Letter>(i)}));
            CHECK(sym == xi * xj);
        }
}

TEST_CASE("pure-area rough path") {
    const std::vector<std::vector<double>> zero{{0, 0}, {0, 0}};
    auto trivial = pure_area_rough_path(kT2, zero);
    CHECK(trivial(0.2, 0.9) == WordElement<double>::unit(kT2, 2));

    const std::vector<std::vector<double>> a{{0.0, 0.7}, {-0.7, 0.0}};
    auto x = pure_area_rough_path(kT2, a);
    std::mt19937_64 rng(113);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::array<double, 3> ts{u(rng), u(rng), u(rng)};
        std::sort(ts.begin(), ts.end());
        for (const auto& d : chen_defect(x, ts[0], ts[1], ts[2])) CHECK(d < 1e-14);
    }
    // log terminates at level 2 and reproduces (t-s) A
    auto lg = log_truncated(x(0.1, 0.6));
    CHECK(std::fabs(lg.coeff(Word({0, 1})) - 0.5 * 0.7) < 1e-15);
    CHECK(std::fabs(lg.coeff(Word({1, 0})) + 0.5 * 0.7) < 1e-15);
    CHECK(coeff_traits<double>::to_double(graded_norm(project_grade(lg, 1))) == 0.0);

    const std::vector<std::vector<double>> bad{{0.0, 0.5}, {0.5, 0.0}};
    CHECK_THROWS_AS(pure_area_rough_path(kT2, bad), domain_error);
}

TEST_CASE("hoelder level bounds") {
    const std::vector<std::vector<double>> a{{0.0, 0.7}, {-0.7, 0.0}};
    auto x = pure_area_rough_path(kT2, a);
    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i < 10; ++i)
        for (int j = i + 1; j <= 10; ++j) grid.emplace_back(i / 10.0, j / 10.0);
    auto est = hoelder_level_bounds(x, grid);
    CHECK(est.mu_hat[1] == 0.0);
    CHECK(est.mu_hat[2] == doctest::Approx(1.4).epsilon(1e-12)); // l1 norm of A

    // unit-speed linear path, p = 1
    TensorRoughPath line;
    line.sig = kW2;
    line.order = 2;
    line.p = 1.0;
    line.eval = [](double s, double t) {
        PiecewiseLinearPath<double> seg({0.0, 1.0}, {{0.0, 0.0}, {1.0, 0.0}});
        return path_signature(seg, kW2, 2, s, t);
    };
    auto est2 = hoelder_level_bounds(line, grid);
    CHECK(est2.mu_hat[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lyons extension reproduces the level-3 signature") {
    PiecewiseLinearPath<double> path({0.0, 0.4, 1.0},
                                     {{0.0, 0.0}, {0.2, -0.08}, {0.04, 0.24}});
    TensorRoughPath x;
    x.sig = kT2;
    x.order = 2;
    x.p = 1.0;
    x.eval = [path](double s, double t) { return path_signature(path, kT2, 2, s, t); };

    auto ext = lyons_extend(x, 3, 12);
    auto direct = path_signature(path, kT2, 3, 0.05, 0.95);
    auto diff = ext(0.05, 0.95) - direct;
    CHECK(coeff_traits<double>::to_double(graded_norm(diff)) < 1e-8);
    // levels <= 2 are pinned to the input
    CHECK(project_up_to(ext(0.05, 0.95), 2) == project_up_to(direct, 2));
}

TEST_CASE("lyons extension of the pure-area path matches the exponential") {
    const std::vector<std::vector<double>> a{{0.0, 0.35}, {-0.35, 0.0}};
    auto x = pure_area_rough_path(kT2, a);
    // x_{s,t} = expG((t-s) A): level 3 vanishes, level 4 = (t-s)^2 A▷A / 2
    WordElement<double> area(kT2, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            area.add_term(Word({static_cast<Letter>(i), static_cast<Letter>(j)}),
                          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    auto expected = exp_truncated(area);

    // the per-leaf defect here is O(h^2), so the dyadic limit approaches the
    // exponential at first order in 2^{-d}
    auto err_at = [&](int depth) {
        auto val = lyons_extend_value(x, 0.0, 1.0, 4, depth);
        CHECK(coeff_traits<double>::to_double(graded_norm(project_grade(val, 3))) < 1e-15);
        return coeff_traits<double>::to_double(graded_norm(val - expected));
    };
    const double e8 = err_at(8);
    const double e12 = err_at(12);
    CHECK(e12 < 1e-4);
    CHECK(e12 < e8 / 8.0); // contracting toward the exponential oracle
}

TEST_CASE("lyons extension flags non-contracting input") {
    TensorRoughPath fake;
    fake.sig = kT2;
    fake.order = 2;
    fake.p = 1.0;
    fake.eval = [](double s, double t) {
        WordElement<double> e = WordElement<double>::unit(kT2, 2);
        e.add_term(Word({0}), std::sqrt(t - s)); // wildly non-additive level 1
        return e;
    };
    CHECK_THROWS_AS(lyons_extend_value(fake, 0.0, 1.0, 3, 12), convergence_error);
}

TEST_CASE("branched lift is multiplicative in the tree algebra (exact)") {
    std::mt19937_64 rng(127);
    const Signature tree_sig{AlgebraKind::branched_tree, "ab"};
    for (int rep = 0; rep < 20; ++rep) {
        auto path = random_rational_path(rng, 4, 2);
        std::array<Rational, 3> ts{random_time(rng), random_time(rng), random_time(rng)};
        std::sort(ts.begin(), ts.end());
        auto tau_rs = branched_lift_element(path_signature(path, kT2, 2, ts[0], ts[1]), tree_sig);
        auto tau_st = branched_lift_element(path_signature(path, kT2, 2, ts[1], ts[2]), tree_sig);
        auto tau_rt = branched_lift_element(path_signature(path, kT2, 2, ts[0], ts[2]), tree_sig);
        CHECK(mul_truncated(tau_rs, tau_st) == tau_rt);
    }
}

TEST_CASE("log of the branched lift carries the -1/2 square correction") {
    std::mt19937_64 rng(131);
    const Signature tree_sig{AlgebraKind::branched_tree, "ab"};
    auto path = random_rational_path(rng, 3, 2);
    auto x = path_signature(path, kT2, 2, Rational(0), Rational(1));
    auto tau = branched_lift_element(x, tree_sig);
    auto lg = log_truncated(tau);

    TreeElement<Rational> expected(tree_sig, 2);
    for (int i = 0; i < 2; ++i) {
        auto xi = x.coeff(Word({static_cast<Letter>(i)}));
        expected.add_term(DecoratedTree::leaf(static_cast<Letter>(i)), xi);
        for (int j = 0; j < 2; ++j) {
            auto xj = x.coeff(Word({static_cast<Letter>(j)}));
            auto xij = x.coeff(Word({static_cast<Letter>(i), static_cast<Letter>(j)}));
            expected.add_term(graft({DecoratedTree::leaf(static_cast<Letter>(i))},
                                    static_cast<Letter>(j)),
                              xij - xi * xj / 2);
        }
    }
    expected.normalize();
    CHECK(lg == expected);
}

TEST_CASE("pure-area branched lift log has antisymmetric grafted weights") {
    const Signature tree_sig{AlgebraKind::branched_tree, "ab"};
    const std::vector<std::vector<double>> a{{0.0, 0.45}, {-0.45, 0.0}};
    auto x = pure_area_rough_path(kT2, a);
    auto tau = branched_lift_level2(x, {{0.0, 0.3, 1.0}}, 1e-12);
    auto lg = log_truncated(tau(0.0, 1.0));
    auto t01 = graft({DecoratedTree::leaf(0)}, 1);
    auto t10 = graft({DecoratedTree::leaf(1)}, 0);
    CHECK(lg.coeff(t01) == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(lg.coeff(t10) == doctest::Approx(-0.45).epsilon(1e-12));
    for (const auto& [k, c] : lg.terms()) CHECK(k.grade() == 2);

    // corrupted input is rejected
    TensorRoughPath bad = x;
    bad.eval = [x](double s, double t) {
        auto e = x(s, t);
        e.add_term(Word({0, 0}), 0.1);
        return e;
    };
    CHECK_THROWS_AS(branched_lift_level2(bad, {{0.0, 0.5, 1.0}}, 1e-12), domain_error);
}

TEST_CASE("chen defect localizes corruption and truncation") {
    auto path = sample_path();
    const std::uint32_t n = 3;
    auto x_rs = path_signature(path, kW2, n, Rational(0), Rational(1, 3));
    auto x_st = path_signature(path, kW2, n, Rational(1, 3), Rational(1));
    auto x_rt = path_signature(path, kW2, n, Rational(0), Rational(1));

    // corrupting level 2 shows up exactly at grade 2
    auto corrupted = x_rt;
    corrupted.add_term(Word({0, 1}), Rational(1, 7));
    auto defects = chen_defect(x_rs, x_st, corrupted);
    for (std::size_t g = 0; g < defects.size(); ++g)
        CHECK((g == 2 ? defects[g] != 0 : defects[g] == 0));

    // a truncated-at-n path seen in the 2n algebra has its defect on
    // grades n+1..2n
    auto lift = [&](const WordElement<Rational>& e) { return e.with_order(2 * n); };
    auto wide = chen_defect(lift(x_rs), lift(x_st), lift(x_rt));
    for (std::size_t g = 0; g < wide.size(); ++g) {
        if (g <= n) CHECK(wide[g] == 0);
    }
    bool any_high = false;
    for (std::size_t g = n + 1; g < wide.size(); ++g)
        if (wide[g] != 0) any_high = true;
    CHECK(any_high);
}

TEST_CASE("degenerate intervals with nonzero level parts raise the infinite flag") {
    TensorRoughPath weird;
    weird.sig = kT2;
    weird.order = 2;
    weird.p = 2.0;
    weird.eval = [](double, double) {
        auto e = WordElement<double>::unit(kT2, 2);
        e.add_term(Word({0}), 1.0); // nonzero even when omega = 0
        return e;
    };
    auto est = hoelder_level_bounds(weird, {{0.5, 0.5}});
    CHECK(est.infinite[1] == 1);
}

TEST_CASE("branched lift of the constant unit path is the constant unit") {
    const std::vector<std::vector<double>> zero{{0, 0}, {0, 0}};
    auto x = pure_area_rough_path(kT2, zero);
    auto tau = branched_lift_level2(x, {{0.0, 0.5, 1.0}}, 1e-12);
    const Signature tree_sig{AlgebraKind::branched_tree, "ab"};
    CHECK(tau(0.1, 0.9) == TreeElement<double>::unit(tree_sig, 2));
}

TEST_CASE("branched lift inherits the level bounds of its input") {
    const std::vector<std::vector<double>> a{{0.0, 0.45}, {-0.45, 0.0}};
    auto x = pure_area_rough_path(kT2, a);
    auto tau = branched_lift_level2(x, {{0.0, 0.3, 1.0}}, 1e-12);
    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j <= 8; ++j) grid.emplace_back(i / 8.0, j / 8.0);
    auto mu_in = hoelder_level_bounds(x, grid);
    auto mu_out = hoelder_level_bounds(tau, grid);
    for (std::size_t g = 1; g < mu_in.mu_hat.size(); ++g)
        CHECK(mu_out.mu_hat[g] == doctest::Approx(mu_in.mu_hat[g]).epsilon(1e-12));
}

TEST_CASE("control super-additivity sampling") {
    auto rep = check_superadditive(ControlFunction::time_increment(), 1.0, 1000, 9001);
    CHECK(rep.ok);
    ControlFunction bad{[](double s, double t) { return std::sqrt(t - s); }};
    CHECK(!check_superadditive(bad, 1.0, 1000, 9001).ok);
}

TEST_CASE("path CSV loading is exact for decimal data") {
    const char* tmp = "test_path_tmp.csv";
    {
        std::ofstream out(tmp);
        out << "time,x_1,x_2\n0,0,0\n0.25,0.5,-0.125\n1,1,2\n";
    }
    auto path = load_path_csv<Rational>(tmp);
    CHECK(path.dimension() == 2);
    CHECK(path.times()[1] == Rational(1, 4));
    CHECK(path.values()[1][1] == Rational(-1, 8));
    std::remove(tmp);
}
