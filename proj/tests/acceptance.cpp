// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//
// Usage: acceptance [path-to-pcclone-binary]
// With a binary path, the reproducibility criterion also runs the installed
// CLI twice as separate processes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "pcclone/cli.hpp"
#include "pcclone/pcclone.hpp"

using namespace pcclone;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit_ms;  // <= 0: no limit
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// Samples of (machine, phase state) shared by the simulation criteria: per d,
// the optimal machine and one random-parameter machine, each on n phase states.
template <class Fn>
void for_each_sample(std::size_t d_lo, std::size_t d_hi, std::size_t n, Fn&& fn) {
  for (std::size_t d = d_lo; d <= d_hi; ++d) {
    UniformSource params(derive_seed(2024, 1, d));
    const auto opt = optimal_params(d);
    for (std::size_t i = 0; i < n; ++i) {
      const auto pv = random_phase_vector(d, derive_seed(2024, 2, d * 1000 + i));
      const double theta = params.next(0.0, kPi / 2);
      fn(build_machine(d, opt.alpha, opt.beta), pv);
      fn(build_machine(d, std::cos(theta), std::sin(theta)), pv);
    }
  }
}

std::string capture_process(const std::string& cmd) {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return {};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe.get())) > 0) out.append(buf, n);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli_path = argc > 1 ? argv[1] : "";

  std::vector<Criterion> criteria;

  criteria.push_back({1, "d=2 optimum equals 1/2 + sqrt(1/8) within 1e-12", 1.0, [] {
                        const double f = optimal_fidelity(2);
                        const double err = std::abs(f - (0.5 + std::sqrt(1.0 / 8.0)));
                        const double err_lit = std::abs(f - 0.85355339059);
                        return Outcome{err < 1e-12 && err_lit < 1e-11, "residual " + fmt(err)};
                      }});

  criteria.push_back({2, "d=3 optimum equals (5+sqrt17)/12 within 1e-12", 1.0, [] {
                        const double f = optimal_fidelity(3);
                        const double err = std::abs(f - (5.0 + std::sqrt(17.0)) / 12.0);
                        const double err_lit = std::abs(f - 0.76025880);
                        return Outcome{err < 1e-12 && err_lit < 1e-8, "residual " + fmt(err)};
                      }});

  criteria.push_back({3, "numeric maximizer matches closed-form optimum for d=2..64", 1000.0, [] {
                        double worst_f = 0.0, worst_a = 0.0;
                        for (std::size_t d = 2; d <= 64; ++d) {
                          const auto opt = maximize_fidelity(d, 1e-12);
                          worst_f = std::max(worst_f, std::abs(opt.f_star - optimal_fidelity(d)));
                          worst_a = std::max(worst_a, std::abs(opt.alpha_star - optimal_params(d).alpha));
                        }
                        return Outcome{worst_f < 1e-9 && worst_a < 1e-6,
                                       "worst |dF| " + fmt(worst_f) + ", worst |d alpha| " + fmt(worst_a)};
                      }});

  criteria.push_back({4, "brute-force simulated fidelity equals closed form, d=2..16 x 100 states", 30000.0, [] {
                        double worst = 0.0;
                        for_each_sample(2, 16, 100, [&](const CloningMachine& m, const PhaseVector& pv) {
                          const Ket psi = phase_state(pv);
                          const double sim = fidelity_pure(psi, reduced_clone(clone_state(m, psi)));
                          worst = std::max(worst, std::abs(sim - fidelity_closed_form(m.d(), m.alpha(), m.beta())));
                        });
                        return Outcome{worst < 1e-12, "worst residual " + fmt(worst)};
                      }});

  criteria.push_back({5, "d=2 scalar form (1/sqrt2) rho_in + (1/2 - sqrt(1/8)) I, 100 phases", 1000.0, [] {
                        const auto p = optimal_params(2);
                        const auto m = build_machine(2, p.alpha, p.beta);
                        double worst = 0.0;
                        for (std::uint64_t i = 0; i < 100; ++i) {
                          const Ket psi = phase_state(random_phase_vector(2, derive_seed(5, 0, i)));
                          const Matrix expected = (1.0 / std::sqrt(2.0)) * (psi.amps * psi.amps.adjoint()) +
                                                  (0.5 - std::sqrt(1.0 / 8.0)) * Matrix::Identity(2, 2);
                          const Matrix got = reduced_clone(clone_state(m, psi)).mat;
                          worst = std::max(worst, (got - expected).cwiseAbs().maxCoeff());
                        }
                        return Outcome{worst < 1e-12, "worst entry residual " + fmt(worst)};
                      }});

  criteria.push_back({6, "fidelity constant over 100 random phase vectors (std < 1e-12), d=2..16", 0.0, [] {
                        double worst = 0.0;
                        for (std::size_t d = 2; d <= 16; ++d) {
                          const auto p = optimal_params(d);
                          const auto m = build_machine(d, p.alpha, p.beta);
                          std::vector<double> fs;
                          for (std::uint64_t i = 0; i < 100; ++i) {
                            const Ket psi = phase_state(random_phase_vector(d, derive_seed(6, d, i)));
                            fs.push_back(fidelity_pure(psi, reduced_clone(clone_state(m, psi))));
                          }
                          worst = std::max(worst, detail::sample_std(fs));
                        }
                        return Outcome{worst < 1e-12, "worst sample std " + fmt(worst)};
                      }});

  criteria.push_back({7, "isometry ||V^dag V - I|| and clone symmetry ||rho_A - rho_B|| < 1e-12", 0.0, [] {
                        double worst_iso = 0.0, worst_sym = 0.0;
                        for_each_sample(2, 16, 100, [&](const CloningMachine& m, const PhaseVector& pv) {
                          worst_iso = std::max(worst_iso, m.isometry_residual());
                          const auto rho = clone_state(m, phase_state(pv));
                          worst_sym = std::max(worst_sym,
                                               frobenius_distance(partial_trace(rho, {0}), partial_trace(rho, {1})));
                        });
                        return Outcome{worst_iso < 1e-12 && worst_sym < 1e-12,
                                       "isometry " + fmt(worst_iso) + ", symmetry " + fmt(worst_sym)};
                      }});

  criteria.push_back({8, "optimal fidelity beats UQCM for d=2..64 with strictly decreasing gap", 0.0, [] {
                        bool ok = true;
                        double min_gap = 1.0;
                        for (std::size_t d = 2; d <= 64; ++d) {
                          const double gap = optimal_fidelity(d) - uqcm_fidelity(d);
                          ok = ok && gap > 0.0;
                          min_gap = std::min(min_gap, gap);
                          if (d > 2) ok = ok && gap < optimal_fidelity(d - 1) - uqcm_fidelity(d - 1);
                        }
                        return Outcome{ok, "smallest gap " + fmt(min_gap) + " at d=64"};
                      }});

  criteria.push_back({9, "MUBs for d in {3,5,7,11,13} unbiased and cloned at optimal fidelity", 10000.0, [] {
                        double worst_unb = 0.0, worst_fid = 0.0;
                        for (std::size_t d : {3, 5, 7, 11, 13}) {
                          std::vector<Basis> bases{standard_basis(d)};
                          for (std::size_t l = 0; l < d; ++l) bases.push_back(mub_basis(d, l));
                          for (std::size_t x = 0; x < bases.size(); ++x)
                            for (std::size_t y = x + 1; y < bases.size(); ++y)
                              worst_unb = std::max(worst_unb, unbiasedness_residual(bases[x], bases[y]));
                          const auto p = optimal_params(d);
                          const auto m = build_machine(d, p.alpha, p.beta);
                          for (std::size_t l = 1; l < bases.size(); ++l)
                            for (const auto& psi : bases[l])
                              worst_fid = std::max(worst_fid, std::abs(fidelity_pure(psi, reduced_clone(clone_state(m, psi))) -
                                                                       optimal_fidelity(d)));
                        }
                        return Outcome{worst_unb < 1e-10 && worst_fid < 1e-12,
                                       "unbiasedness " + fmt(worst_unb) + ", fidelity " + fmt(worst_fid)};
                      }});

  criteria.push_back({10, "verify with a fixed seed emits byte-identical JSON", 0.0, [cli_path] {
                        auto once = [] {
                          const char* args[] = {"pcclone", "verify", "--d-max", "8", "--trials", "20", "--seed", "7"};
                          std::ostringstream out, err;
                          const int code = cli::run(8, args, out, err);
                          return std::make_pair(code, out.str());
                        };
                        const auto a = once(), b = once();
                        bool ok = a.first == 0 && b.first == 0 && !a.second.empty() && a.second == b.second;
                        std::string detail = "in-process " + std::to_string(a.second.size()) + " bytes";
                        if (!cli_path.empty()) {
                          const std::string cmd = "'" + cli_path + "' verify --d-max 8 --trials 20 --seed 7";
                          const auto p1 = capture_process(cmd), p2 = capture_process(cmd);
                          ok = ok && !p1.empty() && p1 == p2 && p1 == a.second;
                          detail += ", subprocess " + std::to_string(p1.size()) + " bytes";
                        }
                        return Outcome{ok, detail};
                      }});

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    const bool in_time = c.time_limit_ms <= 0.0 || ms < c.time_limit_ms;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.title << " -- " << o.detail << " ("
              << fmt(ms) << " ms";
    if (c.time_limit_ms > 0.0) std::cout << ", limit " << c.time_limit_ms << " ms";
    if (!in_time) std::cout << ", TOO SLOW";
    std::cout << ")\n";
  }
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED") << '\n';
  return failures == 0 ? 0 : 1;
}
