// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include "dhwalk/cli.hpp"
#include "dhwalk/dhwalk.hpp"

#include "oracles.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace dhwalk;

namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

struct Check {
  std::string failure;
  void expect(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
};

int failures = 0;

void criterion(int n, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failure = std::string("exception: ") + e.what();
  }
  if (c.failure.empty()) {
    std::cout << "PASS criterion " << n << ": " << title << "\n";
  } else {
    ++failures;
    std::cout << "FAIL criterion " << n << ": " << title << " -- " << c.failure << "\n";
  }
}

const std::vector<Rational> samples(const Rational& lo, const Rational& hi) {
  std::vector<Rational> out;
  for (int i = 1; i < 8; ++i) out.push_back(lo + (hi - lo) * Rational(i) / 8);
  return out;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::string scenario(const std::string& name) { return oracle::data_file("scenarios/" + name); }

FixedPointData random_y3(std::mt19937& rng, std::array<Rational, 3>* l = nullptr) {
  const auto t = oracle::random_triple(rng);
  if (l) *l = t;
  return y3_fixed_point_data(t[0], t[1], t[2]);
}

}  // namespace

int main() {
  criterion(1, "Y3(2,3,4) walk: k-sequence, walls, maximum and area table", [](Check& c) {
    const auto t = run_walk(y3_fixed_point_data(q(2), q(3), q(4)));
    c.expect(t.k_sequence() == std::vector<int>{0, 1, 2, 3, 2, 1, 0}, "k-sequence");
    c.expect(t.walls() == std::vector<Rational>{q(2), q(3), q(4), q(5), q(6), q(7)}, "walls");
    c.expect(t.end() == 9 && t.final_report && t.final_report->pass, "maximum at 9");
    const auto& first = t.interval_at(q(1));
    for (const auto& s : samples(q(0), q(2)))
      c.expect(area(first.state.family, LatticeClass{1}, s) == s, "area(L) = t on (0,2)");
    const auto& mid = t.interval_at(q(9, 2));
    const auto& fam = mid.state.family;
    c.expect(mid.state.lattice().name() == "CP2#3", "CP2#3 on (4,5)");
    for (const auto& s : samples(q(4), q(5))) {
      c.expect(area(fam, {1, 0, 0, 0}, s) == s, "area(L)");
      c.expect(area(fam, {0, 1, 0, 0}, s) == s - 2, "area(E1)");
      c.expect(area(fam, {0, 0, 1, 0}, s) == s - 3, "area(E2)");
      c.expect(area(fam, {0, 0, 0, 1}, s) == s - 4, "area(E3)");
      c.expect(area(fam, {1, -1, -1, 0}, s) == 5 - s, "area(L-E1-E2)");
      c.expect(area(fam, {1, -1, 0, -1}, s) == 6 - s, "area(L-E1-E3)");
      c.expect(area(fam, {1, 0, -1, -1}, s) == 7 - s, "area(L-E2-E3)");
    }
  });

  criterion(2, "Euler class flips from -L to +L", [](Check& c) {
    const auto t = run_walk(y3_fixed_point_data(q(2), q(3), q(4)));
    const LatticeClass L{1};
    c.expect(oracle::dot(t.initial_state().euler.cls, L) == -1, "initial pair(e,L) = -1");
    c.expect(t.final_state().lattice().name() == "CP2", "final space CP2");
    c.expect(oracle::dot(t.final_state().euler.cls, L) == 1, "final pair(e,L) = +1");
  });

  criterion(3, "Y3(1,2,4) and Y3(1,1,1) branches", [](Check& c) {
    const auto a = run_walk(y3_fixed_point_data(q(1), q(2), q(4)));
    c.expect(a.k_sequence() == std::vector<int>{0, 1, 2, 1, 2, 1, 0}, "Y3(1,2,4) k-sequence");
    c.expect(a.final_report->pass, "Y3(1,2,4) final check");
    const auto b = run_walk(y3_fixed_point_data(q(1), q(1), q(1)));
    c.expect(b.k_sequence() == std::vector<int>{0, 3, 0}, "Y3(1,1,1) k-sequence");
    c.expect(b.events.size() == 2 && b.events[0].actions.size() == 3 && b.events[1].actions.size() == 3,
             "two triple levels");
    const auto cert = certify(b);
    c.expect(cert.level == CertificationLevel::certified, "Y3(1,1,1) certified");
    c.expect(std::find(cert.fact_ids.begin(), cert.fact_ids.end(), "blowup-equal-diff0") != cert.fact_ids.end(),
             "equal-areas branch used");
  });

  criterion(4, "DH volume: continuity, zero ends, integral l1*l2*l3", [](Check& c) {
    auto check = [&](const std::array<Rational, 3>& l) {
      const auto t = run_walk(y3_fixed_point_data(l[0], l[1], l[2]));
      c.expect(t.intervals.front().volume(t.start()) == 0 && t.intervals.back().volume(t.end()) == 0, "zero at ends");
      for (std::size_t i = 0; i + 1 < t.intervals.size(); ++i) {
        const auto w = t.intervals[i].hi;
        c.expect(t.intervals[i].volume(w) == t.intervals[i + 1].volume(w), "continuity at " + to_string(w));
      }
      Rational total = 0, reference = 0;
      for (const auto& iv : t.intervals) {
        total += iv.volume.integrate(iv.lo, iv.hi);
        reference += oracle::simpson([&](const Rational& x) { return oracle::y3_volume(l, x); }, iv.lo, iv.hi);
      }
      c.expect(total == l[0] * l[1] * l[2], "integral equals product");
      c.expect(total == reference, "integral matches independent oracle");
      return total;
    };
    c.expect(check({q(2), q(3), q(4)}) == 24, "Y3(2,3,4) integral 24");
    std::mt19937 rng(2024);
    for (int i = 0; i < 20; ++i) check(oracle::random_triple(rng));
  });

  criterion(5, "exceptional classes agree with brute-force search, k = 0..3", [](Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k <= 3; ++k) {
      const auto got = exceptional_classes(k).classes;
      const std::set<LatticeClass> mine(got.begin(), got.end());
      c.expect(mine.size() == got.size(), "no duplicates");
      c.expect(mine == oracle::brute_exceptional(k), "set equality at k = " + std::to_string(k));
    }
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(dt < 1.0, "runtime under 1 s");
  });

  criterion(6, "blow-down law on 100 random walks", [](Check& c) {
    std::mt19937 rng(6);
    std::size_t downs = 0;
    for (int n = 0; n < 100; ++n) {
      const auto t = run_walk(random_y3(rng));
      for (const auto& ev : t.events)
        for (const auto& a : ev.actions) {
          if (a.kind != ActionKind::blow_down) continue;
          ++downs;
          c.expect(oracle::dot(a.euler_before, a.cls) == 1, "pair(e-, C) = 1");
          c.expect(a.blow_down.has_value(), "blow-down map recorded");
          const auto& map = *a.blow_down;
          for (int j = 0; j < 50; ++j) {
            const auto x = oracle::random_class(rng, map.downstairs.rank());
            c.expect(map.pushforward(map.pullback(x)) == x, "push(pull(x)) = x");
          }
        }
    }
    c.expect(downs >= 300, "at least three blow-downs per walk");
  });

  criterion(7, "split at 5 random regular values and recompose", [](Check& c) {
    std::mt19937 rng(7);
    for (int n = 0; n < 20; ++n) {
      const auto t = run_walk(random_y3(rng));
      const auto ref = trace_fingerprint(t);
      for (int j = 0; j < 5; ++j) {
        auto [a, b] = split_trace(t, oracle::random_regular(rng, t));
        c.expect(trace_fingerprint(compose_traces(a, b)) == ref, "recomposed fingerprint");
      }
    }
  });

  criterion(8, "time reversal and permutation invariance on 50 random scenarios", [](Check& c) {
    std::mt19937 rng(8);
    for (int n = 0; n < 50; ++n) {
      std::array<Rational, 3> l;
      const auto d = random_y3(rng, &l);
      const auto fwd = run_walk(d);
      const auto back = run_walk(reverse_time(d));
      const Rational center = d.levels().front().value + d.levels().back().value;
      const std::size_t m = fwd.intervals.size();
      c.expect(back.intervals.size() == m, "same number of intervals");
      if (back.intervals.size() != m) continue;
      for (std::size_t i = 0; i < m; ++i)
        c.expect(fwd.intervals[i].fp.reflected(center) == back.intervals[m - 1 - i].fp, "reflected fingerprint");
      const auto ref = trace_fingerprint(fwd);
      c.expect(trace_fingerprint(run_walk(y3_fixed_point_data(l[2], l[0], l[1]))) == ref, "permutation");
      c.expect(trace_fingerprint(run_walk(y3_fixed_point_data(l[1], l[2], l[0]))) == ref, "permutation");
    }
  });

  criterion(9, "refusals: perturbed values, maximum at 8, corrupted Euler class", [](Check& c) {
    c.expect(run_cli({"validate", scenario("bad_values.json")}) == 2, "validate bad values exits 2");
    c.expect(run_cli({"classify", scenario("bad_values.json")}) == 2, "classify bad values exits 2");
    std::string err;
    c.expect(run_cli({"walk", scenario("y3_234_max8.json")}, nullptr, &err) == 2, "walk max8 exits 2");
    c.expect(err.find("area(L)(8) = 1 != 0") != std::string::npos, "max8 reports area(L)(8) = 1");
    c.expect(run_cli({"classify", scenario("y3_234_max8.json")}) == 2, "classify max8 exits 2");
    const auto full = load_scenario(scenario("y3_234_full.json"));
    const auto bad = load_scenario(scenario("y3_234_corrupt_euler.json"));
    c.expect(weak_classification_check(full, bad).verdict == WeakVerdict::distinct_data, "weak check: distinct data");
    std::string out;
    c.expect(run_cli({"classify", scenario("y3_234_full.json"), "--against", scenario("y3_234_corrupt_euler.json")}, &out) == 2,
             "classify --against exits 2");
    c.expect(out.find("distinct data") != std::string::npos, "verdict printed");
  });

  criterion(10, "small-data bootstrap recovers Euler classes and is idempotent", [](Check& c) {
    const auto full = small_data_bootstrap(load_scenario(scenario("y3_234.json")));
    const auto expected = load_scenario(scenario("y3_234_full.json"));
    const auto& a = full.levels();
    const auto& b = expected.levels();
    c.expect(a.size() == b.size(), "level count");
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      c.expect(a[i].euler_minus.has_value() == b[i].euler_minus.has_value(), "euler present at " + to_string(a[i].value));
      if (a[i].euler_minus && b[i].euler_minus) {
        const auto lat = IntersectionLattice::blowup_plane(static_cast<int>(a[i].euler_minus->size()) - 1);
        c.expect(class_fingerprint(lat, *a[i].euler_minus) == class_fingerprint(lat, *b[i].euler_minus),
                 "fingerprint at " + to_string(a[i].value));
      }
    }
    c.expect(compare_fixed_point_data(full, small_data_bootstrap(full)).same, "idempotent");
  });

  return failures;
}
