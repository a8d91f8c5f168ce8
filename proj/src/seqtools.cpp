#include "lethargy/seqtools.hpp"

#include "lethargy/errors.hpp"

#include <algorithm>
#include <sstream>

namespace lethargy {

namespace {

std::string fmt(const Rational& r) {
  std::ostringstream os;
  os.precision(17);
  os << to_double(r);
  return os.str();
}

std::string fmt(const Extended& e) { return e.is_infinite() ? "inf" : fmt(e.value()); }

}  // namespace

SequenceReport seq_validate(const SequenceSpec& seq, std::size_t horizon) {
  SequenceReport report;
  std::size_t limit = std::max<std::size_t>(horizon, 1);
  if (const auto* e = std::get_if<SequenceSpec::Explicit>(&seq.form())) {
    limit = std::max(limit, e->prefix.size());
  }
  Rational previous = seq.exact(1);
  if (!(previous > 0)) {
    report.ok = false;
    report.failing_index = 1;
    report.message = "e_1 is not positive";
    return report;
  }
  for (std::size_t n = 2; n <= limit + 1; ++n) {
    const Rational current = seq.exact(n);
    if (!(current > 0)) {
      report.ok = false;
      report.failing_index = n;
      report.message = "e_" + std::to_string(n) + " is not positive";
      return report;
    }
    if (!(current < previous)) {
      report.ok = false;
      report.failing_index = n;
      report.message = "sequence is not strictly decreasing at index " + std::to_string(n);
      return report;
    }
    previous = current;
  }
  if (auto tail = seq.tail()) {
    Rational r_max(0);
    for (const auto& term : tail->terms) {
      if (!(term.coefficient > 0)) {
        report.ok = false;
        report.message = "tail rule has a non-positive coefficient";
        return report;
      }
      r_max = std::max(r_max, term.ratio);
    }
    if (!(r_max < 1)) {
      report.ok = false;
      report.failing_index = tail->start + 1;
      report.message = "tail rule does not tend to zero";
      return report;
    }
    report.tail_certificate = "e_n is a sum of geometric terms with ratio <= " + to_string(r_max) +
                              " for n >= " + std::to_string(tail->start);
  } else if (auto law = seq.power_law()) {
    std::ostringstream os;
    os << "e_n = " << law->coefficient << " n^-" << law->exponent << ", decreasing to 0";
    report.tail_certificate = os.str();
  } else {
    report.tail_certificate = "e_n <= e_" + std::to_string(limit) + " beyond the horizon (monotone)";
  }
  report.message = "ok";
  return report;
}

void require_valid(const SequenceSpec& seq, std::size_t horizon) {
  const SequenceReport report = seq_validate(seq, horizon);
  if (!report.ok) throw PreconditionError(condition::kSequence, seq.describe() + ": " + report.message);
}

bool check_rapid(const SequenceSpec& seq, unsigned factor, std::size_t horizon) {
  Rational current = seq.exact(1);
  for (std::size_t n = 1; n <= horizon; ++n) {
    Rational next = seq.exact(n + 1);
    if (current < factor * next) return false;
    current = std::move(next);
  }
  return true;
}

Rational growth_margin(const SequenceSpec& seq, std::size_t horizon) {
  std::size_t limit = horizon;
  auto tail = seq.tail();
  if (tail) limit = std::max(limit, tail->start);
  Rational margin(0);
  bool first = true;
  Rational current = seq.exact(1);
  for (std::size_t n = 1; n <= limit; ++n) {
    Rational next = seq.exact(n + 1);
    const Rational m = current / next - 2;
    if (first || m < margin) margin = m;
    first = false;
    current = std::move(next);
  }
  if (tail) {
    // A ratio of sums of geometric terms is at least 1 / (largest ratio).
    Rational r_max(0);
    for (const auto& term : tail->terms) r_max = std::max(r_max, term.ratio);
    margin = std::min(margin, Rational(1 / r_max - 2));
  } else {
    margin = std::min(margin, Rational(-1));  // ratio tends to 1
  }
  return margin;
}

BSeries b_series(const SequenceSpec& seq, std::size_t n, std::size_t horizon) {
  if (n == 0) throw InvalidSpec("sequence indices start at 1");
  BSeries out;
  out.epsilon = growth_margin(seq, horizon);
  if (!(out.epsilon > 0)) {
    throw PreconditionError(condition::kRatioTest, seq.describe() + ": smallest e_n/e_(n+1) - 2 is " + fmt(out.epsilon));
  }
  const Rational bound_ratio = 1 / (2 + out.epsilon);

  auto b_at = [&](std::size_t m, bool& closed, Rational& remainder) -> Rational {
    const TailSum t = weighted_tail(seq, m, Rational(2));
    if (!t.value.is_infinite() && t.exact) {
      closed = true;
      remainder = 0;
      return t.value.value();
    }
    // Partial sum to the horizon plus a geometric majorant of the rest.
    closed = false;
    Rational sum(0);
    Rational w(1);
    const std::size_t last = std::max(m, horizon);
    for (std::size_t j = m; j <= last; ++j) {
      sum += w * seq.exact(j);
      w *= 2;
    }
    remainder = w * seq.exact(last + 1) * (2 + out.epsilon) / out.epsilon;
    return sum + remainder;
  };

  out.value = b_at(n, out.closed_form, out.remainder_bound);

  bool closed = true;
  Rational rem;
  Rational previous = b_at(1, closed, rem);
  const Rational b1 = previous;
  out.max_ratio = 0;
  for (std::size_t m = 1; m <= horizon; ++m) {
    Rational next = b_at(m + 1, closed, rem);
    out.max_ratio = std::max(out.max_ratio, Rational(next / previous));
    previous = std::move(next);
  }
  if (out.max_ratio > bound_ratio) {
    throw PreconditionError(condition::kRatioTest, "b_(n+1)/b_n reaches " + fmt(out.max_ratio) +
                                                       " above 1/(2+eps) = " + fmt(bound_ratio));
  }
  out.sum_bound = b1 / (1 - bound_ratio);
  return out;
}

Rational lemma_three_slack(const SequenceSpec& seq, std::size_t n, std::size_t m) {
  Rational rhs(0);
  Rational w(1);
  for (std::size_t j = n + 1; j <= n + m; ++j) {
    rhs += w * seq.exact(j);
    w *= 2;
  }
  rhs += w * seq.exact(n + m);  // w = 2^m here
  return seq.exact(n) - rhs;
}

std::optional<Rational> lemma_two_slack(const SequenceSpec& seq, std::size_t n) {
  const TailSum t = weighted_tail(seq, n + 1, Rational(1));
  if (t.value.is_infinite()) return std::nullopt;
  return Rational(seq.exact(n) - t.value.value());
}

LemmaCheck lemma_ineq_check(const SequenceSpec& seq, LemmaMode mode, std::size_t horizon) {
  LemmaCheck out;
  bool first = true;
  auto consider = [&](const Rational& slack, std::size_t n, std::size_t m) {
    if (first || slack < out.min_slack) {
      out.min_slack = slack;
      out.worst_n = n;
      out.worst_m = m;
      first = false;
    }
    if (slack < 0) out.holds = false;
  };
  for (std::size_t n = 1; n <= horizon; ++n) {
    if (mode == LemmaMode::kThree) {
      for (std::size_t m = 1; m <= horizon; ++m) consider(lemma_three_slack(seq, n, m), n, m);
    } else {
      const auto slack = lemma_two_slack(seq, n);
      if (!slack) {
        out.holds = false;
        out.worst_n = n;
        return out;
      }
      consider(*slack, n, 0);
    }
  }
  return out;
}

namespace {

// Largest n >= lo with f <= c e_n, given that it holds at lo.
std::size_t scan_checkpoint(const SequenceSpec& seq, const Rational& f, unsigned c, std::size_t lo) {
  auto holds = [&](std::size_t n) { return f <= c * seq.exact(n); };
  std::size_t step = 1;
  std::size_t hi = lo + step;
  while (holds(hi)) {
    lo = hi;
    step *= 2;
    hi = lo + step;
    if (hi > kRescaleScanCap) {
      throw PreconditionError(condition::kSequence, "checkpoint scan exceeded " + std::to_string(kRescaleScanCap) +
                                                        " terms; the sequence decays too slowly");
    }
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (holds(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

template <class Stop>
RescaleResult rescale_impl(const SequenceSpec& seq, unsigned factor, Stop stop) {
  if (factor != 2 && factor != 3) throw InvalidSpec("rescale factor must be 2 or 3");
  require_valid(seq, 64);
  RescaleResult out;
  out.factor = factor;
  out.f_exact.push_back(seq.exact(1));
  out.n.push_back(1);
  while (!stop(out)) {
    const Rational& fk = out.f_exact.back();
    const std::size_t next = out.n.back() + 1;
    Rational e_next = seq.exact(next);
    if (factor * e_next <= fk) {
      out.f_exact.push_back(std::move(e_next));
      out.n.push_back(next);
      out.rapid.push_back(true);
    } else {
      const std::size_t nk = scan_checkpoint(seq, fk, factor, next);
      out.f_exact.push_back(fk / factor);
      out.n.push_back(nk);
      out.rapid.push_back(false);
    }
  }
  out.f.reserve(out.f_exact.size());
  for (const auto& v : out.f_exact) out.f.push_back(to_double(v));
  return out;
}

}  // namespace

RescaleResult rescale(const SequenceSpec& seq, unsigned factor, std::size_t checkpoints) {
  if (checkpoints == 0) throw InvalidSpec("at least one checkpoint required");
  return rescale_impl(seq, factor, [checkpoints](const RescaleResult& r) { return r.n.size() >= checkpoints; });
}

RescaleResult rescale_until(const SequenceSpec& seq, unsigned factor, std::size_t min_level) {
  return rescale_impl(seq, factor, [min_level](const RescaleResult& r) { return r.n.back() >= min_level; });
}

DeltaSchedule delta_select(const SequenceSpec& seq, std::span<const Extended> dnv, std::size_t horizon) {
  if (horizon == 0) throw InvalidSpec("horizon must be at least 1");
  if (dnv.size() < horizon) throw InvalidSpec("need d_(n,V) for every n <= horizon");
  require_valid(seq, horizon);

  DeltaSchedule out;
  out.horizon = horizon;

  // S_n = sum_{j>=n} 2^(j-n) e_j via S_n = e_n + 2 S_{n+1} from a closed tail.
  const TailSum last = weighted_tail(seq, horizon + 1, Rational(2));
  if (last.value.is_infinite()) {
    throw PreconditionError(condition::kSummability,
                            "sum_{j>=n} 2^(j-n) e_j diverges for " + seq.describe() + " (fails at n=1)");
  }
  std::vector<Rational> sums(horizon + 2);
  sums[horizon + 1] = last.value.value();
  for (std::size_t n = horizon; n >= 1; --n) sums[n] = seq.exact(n) + 2 * sums[n + 1];

  out.bounds.reserve(horizon);
  out.slacks.reserve(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) {
    const Extended previous = n == 1 ? Extended::infinity() : Extended(seq.exact(n - 1));
    const Extended bound = min(previous, dnv[n - 1]);
    if (!(Extended(sums[n]) < bound)) {
      throw PreconditionError(condition::kSummability,
                              "fails at n=" + std::to_string(n) + ": sum = " + fmt(sums[n]) + ", bound = " + fmt(bound) +
                                  (Extended(sums[n]) == bound ? " (equality)" : ""));
    }
    out.bounds.push_back(bound);
    // With both bounds infinite only finiteness is needed; any positive
    // slack works, and S_1 keeps delta_1 on the scale of the targets.
    out.slacks.push_back(bound.is_infinite() ? sums[n] : Rational(bound.value() - sums[n]));
  }

  Rational running = out.slacks.front();
  Rational quarter_pow(1, 16);  // 4^-(j+1) at j = 1
  out.deltas.reserve(horizon);
  for (std::size_t j = 1; j <= horizon; ++j) {
    running = std::min(running, out.slacks[j - 1]);
    out.deltas.push_back(running * quarter_pow);
    quarter_pow /= 4;
  }

  // D_n = sum_{j>=n} 2^(j-n) delta_j with the 8^-(j-H) continuation.
  std::vector<Rational> dsum(horizon + 2);
  dsum[horizon + 1] = out.deltas.back() / 6;
  for (std::size_t n = horizon; n >= 1; --n) dsum[n] = out.deltas[n - 1] + 2 * dsum[n + 1];

  out.targets.reserve(horizon);
  out.margins.reserve(horizon);
  bool ok = true;
  for (std::size_t n = 1; n <= horizon; ++n) {
    out.targets.push_back(sums[n] + dsum[n]);
    const Extended& bound = out.bounds[n - 1];
    if (bound.is_infinite()) {
      out.margins.push_back(Extended::infinity());
      continue;
    }
    const Rational margin = bound.value() - out.targets.back();
    out.margins.push_back(Extended(margin));
    ok = ok && margin > 0 && 2 * margin >= out.slacks[n - 1];
  }
  if (!ok) throw std::logic_error("delta schedule failed re-verification");
  out.verified = true;
  return out;
}

SequenceSpec perturb_borodin(const SequenceSpec& seq, std::size_t k, std::size_t horizon) {
  for (std::size_t n = 1; n <= horizon; ++n) {
    const auto slack = lemma_two_slack(seq, n);
    if (!slack || *slack < 0) {
      throw PreconditionError(condition::kTailDomination,
                              seq.describe() + " fails at n=" + std::to_string(n) + (slack ? "" : " (divergent tail)"));
    }
  }
  SequenceSpec perturbed = seq.perturbed(k);
  for (std::size_t n = 1; n <= horizon; ++n) {
    const auto slack = lemma_two_slack(perturbed, n);
    if (!slack || !(*slack > 0)) {
      throw std::logic_error("perturbed sequence lost strict tail domination at n=" + std::to_string(n));
    }
  }
  return perturbed;
}

Rational max_consecutive_ratio(const SequenceSpec& seq, std::size_t horizon) {
  Rational best(0);
  Rational current = seq.exact(1);
  for (std::size_t n = 1; n <= horizon; ++n) {
    Rational next = seq.exact(n + 1);
    best = std::max(best, Rational(current / next));
    current = std::move(next);
  }
  return best;
}

std::optional<std::size_t> depth_for_tail(const SequenceSpec& seq, const Rational& eps, std::size_t cap) {
  for (std::size_t n = 1; n <= cap; ++n) {
    const TailSum t = weighted_tail(seq, n, Rational(1));
    if (t.value.is_infinite()) return std::nullopt;
    if (t.value.value() <= eps) return n;
  }
  return std::nullopt;
}

}  // namespace lethargy
