#include "rissim/montecarlo.hpp"

#include "rissim/geometry.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace rissim {

namespace {

// stream tags: block-start draws, per-symbol draws, experiment-fixed LoS phases
constexpr std::uint64_t kTagBlock = 1;
constexpr std::uint64_t kTagSymbol = 2;
constexpr std::uint64_t kTagLos = 3;

constexpr std::int64_t kBlockSize = 256;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void TermAccumulator::add(const TermAccumulator& o) {
  s_re += o.s_re;
  s_im += o.s_im;
  s_abs2 += o.s_abs2;
  s_abs4 += o.s_abs4;
  s_abs2re += o.s_abs2re;
  s_abs2im += o.s_abs2im;
  s_re2 += o.s_re2;
  s_im2 += o.s_im2;
  s_reim += o.s_reim;
  sl_re += o.sl_re;
  sl_im += o.sl_im;
  sl_abs2 += o.sl_abs2;
  x += o.x;
  x2 += o.x2;
  xl += o.xl;
  e += o.e;
  e2 += o.e2;
}

void McAccumulator::add(const McAccumulator& o) {
  trials += o.trials;
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i].add(o.cells[i]);
  for (std::size_t i = 0; i < zeta2_sum.size(); ++i) {
    zeta2_sum[i] += o.zeta2_sum[i];
    zeta2_sq_sum[i] += o.zeta2_sq_sum[i];
    tr_sum[i] += o.tr_sum[i];
  }
}

McContext::McContext(const SystemConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), lsp_(LargeScaleParams::derive(cfg)), seed_(seed) {
  m_ = cfg_.m();
  stats_ = EstimationStats::build(cfg_, lsp_);
  if (m_ > 0) {
    const auto pos = ris_element_positions(cfg_.m_h, cfg_.m_v, cfg_.d_h, cfg_.d_v);
    corr_ = build_correlation(pos, cfg_.lambda);
  }
  pilots_ = build_pilots(cfg_.tau_p, cfg_.k_ue);
  if (cfg_.los_phase_mode == LosPhaseMode::kFixed) {
    RngStream los_rng(seed_, kTagLos);
    fixed_los_.resize(cfg_.n_t, m_);
    for (int c = 0; c < m_; ++c)
      for (int r = 0; r < cfg_.n_t; ++r) fixed_los_(r, c) = los_rng.uniform_phase();
  } else {
    fixed_los_ = MatR::Zero(cfg_.n_t, m_);
  }
}

TrialOutcome McContext::run_trial(std::int64_t trial, const std::vector<int>& symbols) const {
  const int nt = cfg_.n_t;
  const int k_ue = cfg_.k_ue;
  const int m = m_;
  const AgingProfile prof{cfg_.fd_ts};
  const double p = cfg_.p_tau_p;
  const double a = cfg_.a_elem;

  RngStream rng(seed_, kTagBlock, static_cast<std::uint64_t>(trial));

  // block-constant BS-RIS channel
  MatC g_br;
  if (m > 0) {
    MatR los = fixed_los_;
    if (cfg_.los_phase_mode == LosPhaseMode::kPerTrial) {
      for (int c = 0; c < m; ++c)
        for (int r = 0; r < nt; ++r) los(r, c) = rng.uniform_phase();
    }
    g_br = gen_bs_ris(lsp_.beta_br, lsp_.kappa, los, stats_.nlos_weight, rng);
  }

  MatC g_d0(nt, k_ue);
  rng.fill_complex_normal(g_d0);
  for (int k = 0; k < k_ue; ++k) g_d0.col(k) *= std::sqrt(lsp_.beta_d[k]);

  MatC g_r0(m, k_ue);
  VecC scratch(m), col(m);
  for (int k = 0; k < k_ue && m > 0; ++k) {
    corr_.sample_into(a * lsp_.beta_r[k], rng, scratch, col);
    g_r0.col(k) = col;
  }

  VecC v(m);
  rng.fill_unit_phases(v);
  const cdouble phase_sum = v.sum();

  // uplink pilots: direct link, per-UE MMSE
  const MatC y_d = receive_pilot_direct(g_d0, pilots_, p, cfg_.sigma_d_sq, rng);
  MatC ghat_d(nt, k_ue), gtil_d(nt, k_ue);
  for (int k = 0; k < k_ue; ++k) {
    const VecC y = despread(y_d, pilots_.column(k), p);
    ghat_d.col(k) = mmse_direct(y, lsp_.beta_d[k], cfg_.sigma_d_sq, p);
    gtil_d.col(k) = g_d0.col(k) - ghat_d.col(k);
  }

  // cascaded link: per-element scalar MMSE. Only the reflection-weighted sum
  // of the per-element estimates enters the precoder, so the independent
  // per-element corruption replicas aggregate into single sqrt(M)-scaled
  // draws (EMI through the BS-RIS channel, receiver noise) plus the shared
  // direct-channel residual.
  MatC hhat(nt, k_ue);
  VecC emi_rep(nt), z_rep(nt), tmp_m(m);
  for (int k = 0; k < k_ue && m > 0; ++k) {
    corr_.sample_into(a * lsp_.sigma_e_sq, rng, scratch, tmp_m);
    emi_rep.noalias() = g_br * tmp_m;
    rng.fill_complex_normal(z_rep);
    const VecC h_true = g_br * v.cwiseProduct(g_r0.col(k)).eval();
    hhat.col(k) = stats_.ue[k].coef_cascade *
                  (h_true + phase_sum * gtil_d.col(k) + std::sqrt(double(m)) * emi_rep +
                   std::sqrt(double(m) * cfg_.sigma_c_sq / p) * z_rep);
  }
  if (m == 0) hhat.setZero();

  // per-trial precoder inner products reused across symbols
  VecR aa(k_ue), bb(k_ue);
  VecC ab(k_ue);
  for (int k = 0; k < k_ue; ++k) {
    aa(k) = ghat_d.col(k).squaredNorm();
    bb(k) = hhat.col(k).squaredNorm();
    ab(k) = ghat_d.col(k).dot(hhat.col(k));
  }

  const int n_syms = static_cast<int>(symbols.size());
  TrialOutcome out;
  out.trial = trial;
  out.sig.resize(static_cast<std::size_t>(n_syms) * k_ue);
  out.intf.resize(static_cast<std::size_t>(n_syms) * k_ue);
  out.emi.resize(static_cast<std::size_t>(n_syms) * k_ue);
  out.zeta_sq.resize(n_syms);

  MatC phi(nt, k_ue);   // precoder columns (unnormalized)
  MatC t_true(nt, k_ue);
  VecC g_rn(m), u(m), w(nt);
  for (int si = 0; si < n_syms; ++si) {
    const int n = symbols[si];
    RngStream rng_n(seed_, kTagSymbol, static_cast<std::uint64_t>(trial),
                    static_cast<std::uint64_t>(n));
    const double r0 = prof.rho0(n), r1 = prof.rho1(n);
    const double rb0 = prof.rho_bar0(n), rb1 = prof.rho_bar1(n);

    double tr = 0.0;
    for (int k = 0; k < k_ue; ++k) {
      phi.col(k) = r0 * ghat_d.col(k) + r1 * hhat.col(k);
      tr += r0 * r0 * aa(k) + r1 * r1 * bb(k) + 2.0 * r0 * r1 * ab(k).real();
    }
    const double zeta2 = tr > 0.0 ? 1.0 / tr : 0.0;
    out.zeta_sq[si] = zeta2;

    for (int k = 0; k < k_ue; ++k) {
      // true channels at symbol n
      rng_n.fill_complex_normal(w);
      t_true.col(k) = r0 * g_d0.col(k) + rb0 * std::sqrt(lsp_.beta_d[k]) * w;
      if (m > 0) {
        if (cfg_.aging_innovation == AgingInnovation::kCorrelated) {
          corr_.sample_into(a * lsp_.beta_r[k], rng_n, scratch, g_rn);
        } else {
          rng_n.fill_complex_normal(g_rn);
        }
        g_rn = r1 * g_r0.col(k) + rb1 * g_rn;
        t_true.col(k).noalias() += g_br * v.cwiseProduct(g_rn).eval();
        // downlink EMI scattered off the RIS toward UE k
        corr_.sample_into(a * lsp_.sigma_e_sq, rng_n, scratch, u);
        out.emi[si * k_ue + k] = std::norm(v.cwiseProduct(g_rn).dot(u));
      } else {
        out.emi[si * k_ue + k] = 0.0;
      }
    }

    for (int k = 0; k < k_ue; ++k) {
      double intf = 0.0;
      for (int j = 0; j < k_ue; ++j) {
        const cdouble c_kj = t_true.col(k).dot(phi.col(j));
        if (j == k)
          out.sig[si * k_ue + k] = c_kj;
        else
          intf += std::norm(c_kj);
      }
      out.intf[si * k_ue + k] = intf;
    }
  }
  return out;
}

TrialOutcome run_trial(const SystemConfig& cfg, std::uint64_t seed, std::int64_t trial,
                       const std::vector<int>& symbols) {
  return McContext(cfg, seed).run_trial(trial, symbols);
}

namespace {

std::vector<int> resolve_symbols(const SystemConfig& cfg, const McOptions& opts) {
  if (!opts.symbols.empty()) return opts.symbols;
  std::vector<int> syms{1, 10, 50};
  if (cfg.tau_d() > 50) syms.push_back(cfg.tau_d());
  return syms;
}

void accumulate_trial(McAccumulator& acc, const TrialOutcome& t) {
  const int k_ue = acc.k_ue;
  for (std::size_t si = 0; si < acc.symbols.size(); ++si) {
    const double z2 = t.zeta_sq[si];
    acc.zeta2_sum[si] += z2;
    acc.zeta2_sq_sum[si] += z2 * z2;
    acc.tr_sum[si] += z2 > 0.0 ? 1.0 / z2 : 0.0;
    const double zd = acc.zeta2_det[si];
    for (int k = 0; k < k_ue; ++k) {
      auto& c = acc.cell(static_cast<int>(si), k);
      const cdouble raw = t.sig[si * k_ue + k];
      const cdouble s = std::sqrt(zd) * raw;
      const double re = s.real(), im = s.imag(), a2 = std::norm(s);
      c.s_re += re;
      c.s_im += im;
      c.s_abs2 += a2;
      c.s_abs4 += a2 * a2;
      c.s_abs2re += a2 * re;
      c.s_abs2im += a2 * im;
      c.s_re2 += re * re;
      c.s_im2 += im * im;
      c.s_reim += re * im;
      const cdouble sl = std::sqrt(z2) * raw;
      c.sl_re += sl.real();
      c.sl_im += sl.imag();
      c.sl_abs2 += std::norm(sl);
      const double xi = zd * t.intf[si * k_ue + k];
      c.x += xi;
      c.x2 += xi * xi;
      c.xl += z2 * t.intf[si * k_ue + k];
      const double em = t.emi[si * k_ue + k];
      c.e += em;
      c.e2 += em * em;
    }
  }
}

McAccumulator make_accumulator(const McContext& ctx, const std::vector<int>& symbols) {
  McAccumulator acc;
  acc.k_ue = ctx.config().k_ue;
  acc.symbols = symbols;
  acc.cells.resize(symbols.size() * acc.k_ue);
  acc.zeta2_sum.assign(symbols.size(), 0.0);
  acc.zeta2_sq_sum.assign(symbols.size(), 0.0);
  acc.tr_sum.assign(symbols.size(), 0.0);
  const AgingProfile prof{ctx.config().fd_ts};
  for (const int n : symbols)
    acc.zeta2_det.push_back(
        zeta_sq_deterministic(ctx.stats(), prof, n, ctx.config().n_t, ctx.config().m()));
  return acc;
}

}  // namespace

McAccumulator run_blocks(const McContext& ctx, const McOptions& opts) {
  const auto symbols = resolve_symbols(ctx.config(), opts);
  const std::int64_t n_blocks = (opts.trials + kBlockSize - 1) / kBlockSize;
  std::vector<McAccumulator> blocks(static_cast<std::size_t>(n_blocks));
  for (auto& b : blocks) b = make_accumulator(ctx, symbols);

  int workers = opts.workers > 0 ? opts.workers
                                 : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  std::atomic<std::int64_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= n_blocks) break;
      const std::int64_t lo = b * kBlockSize;
      const std::int64_t hi = std::min(opts.trials, lo + kBlockSize);
      auto& acc = blocks[static_cast<std::size_t>(b)];
      for (std::int64_t t = lo; t < hi; ++t) {
        accumulate_trial(acc, ctx.run_trial(t, symbols));
        ++acc.trials;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // deterministic pairwise reduction in block order
  while (blocks.size() > 1) {
    std::vector<McAccumulator> merged;
    merged.reserve((blocks.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < blocks.size(); i += 2) {
      blocks[i].add(blocks[i + 1]);
      merged.push_back(std::move(blocks[i]));
    }
    if (blocks.size() % 2 == 1) merged.push_back(std::move(blocks.back()));
    blocks = std::move(merged);
  }
  return std::move(blocks.front());
}

EmpiricalTerms empirical_terms(const McAccumulator& acc) {
  if (acc.trials < 2) throw InvalidInput("empirical_terms: need at least two trials");
  const double n = static_cast<double>(acc.trials);
  EmpiricalTerms out;
  out.trials = acc.trials;
  out.symbols = acc.symbols;
  for (std::size_t si = 0; si < acc.symbols.size(); ++si) {
    const double zeta_mean = acc.zeta2_sum[si] / n;
    for (int k = 0; k < acc.k_ue; ++k) {
      const auto& c = acc.cell(static_cast<int>(si), k);
      EmpiricalCell cell;
      cell.k = k;
      cell.n = acc.symbols[si];
      const double mre = c.s_re / n, mim = c.s_im / n;
      const double m2 = c.s_abs2 / n;
      const double mean_abs2 = mre * mre + mim * mim;
      // moments around the mean for the delta-method standard errors
      const double var_re = std::max(0.0, c.s_re2 / n - mre * mre);
      const double var_im = std::max(0.0, c.s_im2 / n - mim * mim);
      const double cov_ri = c.s_reim / n - mre * mim;

      cell.i0.value = mean_abs2;
      cell.i0.std_err = 2.0 *
                        std::sqrt(std::max(0.0, mre * mre * var_re + mim * mim * var_im +
                                                    2.0 * mre * mim * cov_ri)) /
                        std::sqrt(n);

      cell.i1.value = m2 - mean_abs2;
      {
        // Var(|s|^2 - |mean|^2) via the gradient of f(m2, mre, mim)
        const double m4 = c.s_abs4 / n;
        const double var_abs2 = std::max(0.0, m4 - m2 * m2);
        const double cov_abs2_re = c.s_abs2re / n - m2 * mre;
        const double cov_abs2_im = c.s_abs2im / n - m2 * mim;
        const double g1 = 1.0, g2 = -2.0 * mre, g3 = -2.0 * mim;
        const double var_f = g1 * g1 * var_abs2 + g2 * g2 * var_re + g3 * g3 * var_im +
                             2.0 * g1 * g2 * cov_abs2_re + 2.0 * g1 * g3 * cov_abs2_im +
                             2.0 * g2 * g3 * cov_ri;
        cell.i1.std_err = std::sqrt(std::max(0.0, var_f) / n);
      }

      cell.i2.value = c.x / n;
      cell.i2.std_err = std::sqrt(std::max(0.0, c.x2 / n - cell.i2.value * cell.i2.value) / n);
      cell.i3.value = c.e / n;
      cell.i3.std_err = std::sqrt(std::max(0.0, c.e2 / n - cell.i3.value * cell.i3.value) / n);

      const double ml_re = c.sl_re / n, ml_im = c.sl_im / n;
      cell.i0_literal = ml_re * ml_re + ml_im * ml_im;
      cell.i1_literal = c.sl_abs2 / n - cell.i0_literal;
      cell.i2_literal = c.xl / n;
      cell.zeta_ratio = acc.zeta2_det[si] > 0.0 ? zeta_mean / acc.zeta2_det[si] : 1.0;
      cell.trace_mean = acc.tr_sum[si] / n;
      out.cells.push_back(cell);
    }
  }
  return out;
}

EmpiricalTerms empirical_terms(const std::vector<TrialOutcome>& outcomes,
                               const std::vector<int>& symbols, int k_ue,
                               const std::vector<double>& zeta2_det) {
  if (outcomes.size() < 2) throw InvalidInput("empirical_terms: need at least two trials");
  McAccumulator acc;
  acc.k_ue = k_ue;
  acc.symbols = symbols;
  acc.cells.resize(symbols.size() * k_ue);
  acc.zeta2_sum.assign(symbols.size(), 0.0);
  acc.zeta2_sq_sum.assign(symbols.size(), 0.0);
  acc.tr_sum.assign(symbols.size(), 0.0);
  acc.zeta2_det = zeta2_det;
  for (const auto& t : outcomes) {
    accumulate_trial(acc, t);
    ++acc.trials;
  }
  return empirical_terms(acc);
}

std::vector<TermComparison> compare(const SinrBreakdown& analytic, const EmpiricalCell& empirical,
                                    double tolerance) {
  if (analytic.k != empirical.k || analytic.n != empirical.n)
    throw InvalidInput("compare: mismatched (k, n) indices");
  std::vector<TermComparison> rows;
  const double analytic_vals[4] = {analytic.i0, analytic.i1, analytic.i2, analytic.i3};
  const Estimate emp_vals[4] = {empirical.i0, empirical.i1, empirical.i2, empirical.i3};
  const double lit_vals[4] = {empirical.i0_literal, empirical.i1_literal, empirical.i2_literal,
                              empirical.i3.value};
  for (int t = 0; t < 4; ++t) {
    TermComparison r;
    r.k = analytic.k;
    r.n = analytic.n;
    r.term = t;
    r.analytic = analytic_vals[t];
    r.empirical = emp_vals[t].value;
    r.std_err = emp_vals[t].std_err;
    r.empirical_literal = lit_vals[t];
    r.zeta_ratio = empirical.zeta_ratio;
    if (r.analytic == 0.0 && r.empirical == 0.0) {
      r.rel_gap = 0.0;
    } else if (r.analytic == 0.0) {
      r.rel_gap = std::numeric_limits<double>::infinity();
    } else {
      r.rel_gap = std::abs(r.empirical - r.analytic) / std::abs(r.analytic);
    }
    r.pass = r.rel_gap <= tolerance;
    rows.push_back(r);
  }
  return rows;
}

bool ComparisonReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

std::string ComparisonReport::to_csv() const {
  std::ostringstream os;
  os << "config_hash,seed,trials,tolerance,k,n,term,analytic,empirical,std_err,rel_gap,pass,"
        "empirical_literal,zeta_ratio\n";
  for (const auto& r : rows) {
    os << std::hex << config_hash << std::dec << "," << seed << "," << trials << ","
       << fmt(tolerance) << "," << r.k + 1 << "," << r.n << ",I" << r.term << ","
       << fmt(r.analytic) << "," << fmt(r.empirical) << "," << fmt(r.std_err) << ","
       << fmt(r.rel_gap) << "," << (r.pass ? 1 : 0) << "," << fmt(r.empirical_literal) << ","
       << fmt(r.zeta_ratio) << "\n";
  }
  return os.str();
}

ComparisonReport validate(const SystemConfig& cfg, const McOptions& opts) {
  McContext ctx(cfg, opts.seed);
  const McAccumulator acc = run_blocks(ctx, opts);
  const EmpiricalTerms emp = empirical_terms(acc);
  SinrAnalytics analytics(ctx.config(), ctx.large_scale(), ctx.stats(), ctx.correlation());

  ComparisonReport report;
  report.config_hash = cfg.hash();
  report.seed = opts.seed;
  report.trials = acc.trials;
  report.tolerance = opts.tolerance;
  for (const auto& cell : emp.cells) {
    const SinrBreakdown b = analytics.evaluate(cell.k, cell.n);
    for (auto& row : compare(b, cell, opts.tolerance)) report.rows.push_back(row);
  }
  return report;
}

}  // namespace rissim
