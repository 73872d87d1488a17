#include "mdlb/oracle_sim.hpp"
#include "mdlb/parallel.hpp"
#include "mdlb/rng.hpp"
#include "mdlb/symmetry.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mdlb {
namespace {

constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

std::vector<int> inverse(const std::vector<int>& pos) {
  std::vector<int> inv(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) inv[static_cast<std::size_t>(pos[k])] = static_cast<int>(k);
  return inv;
}

std::vector<double> cumulative(std::span<const double> p) {
  std::vector<double> c(p.size());
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) c[i] = (s += p[i]);
  return c;
}

// Index of the first cumulative entry above u * total; skips zero-mass entries.
std::size_t draw(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  if (it == cdf.end()) --it;
  auto idx = static_cast<std::size_t>(it - cdf.begin());
  while (idx > 0 && cdf[idx] == cdf[idx - 1]) --idx;
  return idx;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

// Everything a trial needs, precomputed from the source.
struct Tables {
  int n = 0;
  std::vector<double> label_cdf;              // over label-vector codes
  std::vector<std::vector<double>> truth_cdf;  // per label code
  std::vector<std::vector<double>> prior_cdf;  // per label code
  std::vector<std::vector<std::size_t>> label_map;  // [arrangement][code] -> arranged code
  std::vector<std::vector<std::size_t>> pred_map;
  std::vector<std::vector<int>> positions;  // [arrangement] pos[k]
  std::vector<std::vector<int>> label_digits;
  std::vector<std::vector<int>> pred_digits;
};

Tables build(const CoveringSource& s, ArrangementKind kind) {
  if (!s.truth.same_shape(s.prior)) throw std::invalid_argument("covering: truth and prior shapes differ");
  if (s.label_dist.size() != static_cast<std::size_t>(s.truth.label_alphabet())) {
    throw std::invalid_argument("covering: label_dist size must equal the label alphabet");
  }
  s.truth.validate();
  s.prior.validate();
  Tables t;
  t.n = s.truth.n();
  const auto& lc = s.truth.label_codec();
  const auto& pc = s.truth.pred_codec();
  std::vector<double> label_p(lc.size());
  for (std::size_t c = 0; c < lc.size(); ++c) label_p[c] = label_vector_probability(lc, c, s.label_dist);
  t.label_cdf = cumulative(label_p);
  for (std::size_t c = 0; c < lc.size(); ++c) {
    t.truth_cdf.push_back(cumulative(s.truth.row(c)));
    t.prior_cdf.push_back(cumulative(s.prior.row(c)));
  }
  t.positions = arrangements(kind, t.n);
  for (const auto& pos : t.positions) {
    const auto inv = inverse(pos);
    t.label_map.push_back(permuted_codes(lc, inv));
    t.pred_map.push_back(permuted_codes(pc, inv));
  }
  for (std::size_t c = 0; c < lc.size(); ++c) t.label_digits.push_back(lc.decode(c));
  for (std::size_t c = 0; c < pc.size(); ++c) t.pred_digits.push_back(pc.decode(c));
  return t;
}

struct Block {
  std::size_t labels;  // arranged codes
  std::size_t preds;
  int arrangement;
};

// Training-minus-ghost error count of `preds` in arranged coordinates.
int gap_count(const Tables& t, const Block& b, std::size_t preds) {
  const auto& pos = t.positions[static_cast<std::size_t>(b.arrangement)];
  const auto& y = t.label_digits[b.labels];
  const auto& v = t.pred_digits[preds];
  int g = 0;
  for (int i = 0; i < t.n; ++i) {
    const auto tr = static_cast<std::size_t>(pos[static_cast<std::size_t>(i)]);
    const auto gh = static_cast<std::size_t>(pos[static_cast<std::size_t>(i + t.n)]);
    g += (y[gh] != v[gh]) - (y[tr] != v[tr]);
  }
  return g;
}

std::size_t first_cover(const Tables& t, const CoveringSource& s, const CoveringOptions& o, std::size_t limit,
                        std::uint64_t trial_seed) {
  std::mt19937_64 rng(trial_seed);
  std::vector<Block> blocks(static_cast<std::size_t>(o.blocks));
  const auto arrangements_count = t.positions.size();
  for (auto& b : blocks) {
    const std::size_t y = draw(t.label_cdf, uniform01(rng));
    const std::size_t yhat = draw(t.truth_cdf[y], uniform01(rng));
    b.arrangement = static_cast<int>(rng() % arrangements_count);
    b.labels = t.label_map[static_cast<std::size_t>(b.arrangement)][y];
    b.preds = t.pred_map[static_cast<std::size_t>(b.arrangement)][yhat];
  }

  if (o.mode == CoverMode::lossless && !o.explicit_codebook) {
    // Codewords match independently with probability q, so the first match is geometric.
    double log_q = 0.0;
    for (const auto& b : blocks) log_q += std::log(s.prior(b.labels, b.preds));
    if (log_q == -std::numeric_limits<double>::infinity()) return kNever;
    const double q = std::exp(log_q);
    if (q >= 1.0) return 1;
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    const double g = std::floor(std::log(u) / std::log1p(-q));
    return g + 1.0 > static_cast<double>(limit) ? kNever : static_cast<std::size_t>(g) + 1;
  }

  int target_gap = 0;
  if (o.mode == CoverMode::lossy) {
    for (const auto& b : blocks) target_gap += gap_count(t, b, b.preds);
  }
  const double scale = 1.0 / (static_cast<double>(o.blocks) * t.n);
  for (std::size_t r = 1; r <= limit; ++r) {
    bool hit = true;
    int gap = 0;
    for (const auto& b : blocks) {
      const std::size_t c = draw(t.prior_cdf[b.labels], uniform01(rng));
      if (o.mode == CoverMode::lossless) {
        if (c != b.preds) hit = false;
      } else {
        gap += gap_count(t, b, c);
      }
    }
    if (o.mode == CoverMode::lossy) hit = (target_gap - gap) * scale < o.epsilon;
    if (hit) return r;
  }
  return kNever;
}

}  // namespace

std::size_t codebook_size(double rate, int blocks) {
  if (!(rate >= 0.0) || blocks < 1) throw std::invalid_argument("codebook_size: need rate >= 0 and blocks >= 1");
  const double size = std::ceil(std::exp(blocks * rate) - 1e-9);
  if (!(size <= static_cast<double>(kCodebookBudget))) {
    throw std::length_error("codebook size e^{m R} exceeds the 2^22 budget");
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(size));
}

std::vector<double> rate_sweep(double lo, double hi, int count) {
  if (count < 2 || !(hi >= lo)) throw std::invalid_argument("rate_sweep: need count >= 2 and hi >= lo");
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) r[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return r;
}

std::string CoverageCurve::to_csv() const {
  std::ostringstream out;
  out << std::setprecision(10) << "rate,codebook_size,coverage,stderr\n";
  for (const auto& p : points) out << p.rate << ',' << p.codebook_size << ',' << p.coverage << ',' << p.std_error << '\n';
  return out.str();
}

CoverageCurve covering_simulation(const CoveringSource& source, const CoveringOptions& options,
                                  std::span<const double> rates) {
  if (options.blocks < 1 || options.trials < 1) throw std::invalid_argument("covering: blocks and trials must be >= 1");
  if (rates.empty()) throw std::invalid_argument("covering: empty rate list");
  if (options.mode == CoverMode::lossless && options.epsilon != 0.0) {
    throw std::invalid_argument("covering: epsilon applies to lossy mode only");
  }
  const auto tables = build(source, options.arrangement);
  std::vector<std::size_t> sizes;
  for (double r : rates) sizes.push_back(codebook_size(r, options.blocks));
  const std::size_t limit = *std::max_element(sizes.begin(), sizes.end());

  std::vector<std::size_t> hit(options.trials);
  parallel_for(options.trials, [&](std::size_t i) {
    hit[i] = first_cover(tables, source, options, limit, sub_seed(options.seed, i));
  });

  CoverageCurve curve;
  curve.kl = expected_row_kl(source.truth, source.prior, source.label_dist);
  // Exact cross-entropy of the arranged predictions under the prior.
  double ce = 0.0;
  const double share = 1.0 / static_cast<double>(tables.positions.size());
  const auto& lc = source.truth.label_codec();
  for (std::size_t y = 0; y < lc.size(); ++y) {
    const double py = label_vector_probability(lc, y, source.label_dist);
    if (py == 0.0) continue;
    for (std::size_t v = 0; v < source.truth.cols(); ++v) {
      const double pv = source.truth(y, v);
      if (pv == 0.0) continue;
      for (std::size_t a = 0; a < tables.positions.size(); ++a) {
        const double q = source.prior(tables.label_map[a][y], tables.pred_map[a][v]);
        ce += q > 0.0 ? -py * pv * share * std::log(q) : std::numeric_limits<double>::infinity();
      }
    }
  }
  curve.cross_entropy_rate = ce;

  const double trials = static_cast<double>(options.trials);
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const auto covered = std::count_if(hit.begin(), hit.end(), [&](std::size_t h) { return h <= sizes[k]; });
    CoveragePoint p;
    p.rate = rates[k];
    p.codebook_size = sizes[k];
    p.coverage = static_cast<double>(covered) / trials;
    p.std_error = std::sqrt(p.coverage * (1.0 - p.coverage) / trials);
    curve.points.push_back(p);
  }
  return curve;
}

CoveringSource memorizer_source() {
  DiscreteConditional truth(1, 2, 2);
  const auto& codec = truth.label_codec();
  for (std::size_t y = 0; y < truth.rows(); ++y) {
    const auto d = codec.decode(y);
    const std::vector<int> v{d[0], 1 - d[1]};
    truth.at(y, truth.pred_codec().encode(v)) = 1.0;
  }
  truth.validate();
  auto prior = symmetrize(truth, {SymmetryKind::type1, 1, std::nullopt});
  return {{0.5, 0.5}, std::move(truth), std::move(prior)};
}

VerificationReport verify_covering_monotonicity(int seeds, std::size_t trials, std::uint64_t seed) {
  if (seeds < 1) throw std::invalid_argument("verify_covering_monotonicity: seeds must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const auto source = memorizer_source();
  CoveringOptions o;
  o.blocks = 8;
  o.trials = trials;
  const double kl = expected_row_kl(source.truth, source.prior, source.label_dist);
  const auto rates = rate_sweep(std::max(kl - 0.5, 0.0), kl + 0.5, 6);

  double monotone = std::numeric_limits<double>::infinity();
  int wins = 0;
  std::string curve_text;
  for (int s = 0; s < seeds; ++s) {
    o.seed = sub_seed(seed, static_cast<std::uint64_t>(s));
    const auto curve = covering_simulation(source, o, rates);
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
      monotone = std::min(monotone, curve.points[k].coverage - curve.points[k - 1].coverage);
    }
    wins += curve.points.back().coverage > curve.points.front().coverage;
    if (s == 0) {
      for (const auto& p : curve.points) curve_text += " " + std::to_string(p.coverage);
    }
  }
  VerificationReport r;
  r.check = "covering_monotonicity";
  r.parameters = {{"seeds", seeds}, {"trials", static_cast<double>(trials)}, {"blocks", o.blocks},
                  {"kl", kl}, {"seed", static_cast<double>(seed)}};
  r.add_part("coverage nondecreasing in rate", monotone, 0.0);
  const int needed = seeds - seeds / 20;
  r.add_part("coverage(KL+0.5) > coverage(max(KL-0.5,0)) in >= " + std::to_string(needed) + " seeds",
             wins - needed, 0.0, std::to_string(wins) + " of " + std::to_string(seeds));
  r.notes.push_back("first-seed coverage curve:" + curve_text);
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace mdlb
