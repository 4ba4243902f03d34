// Copyright 2026 The acore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "acore/harness.h"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "acore/error.h"
#include "acore/kernels.h"

namespace acore::harness {

using workflow::FailingCheck;
using workflow::Simulation;

namespace {

double MsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string Fmt(const Summary& s) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << "mean=" << s.mean << " median=" << s.median << " p95=" << s.p95 << " n=" << s.count;
  return out.str();
}

int8_t Outcome(const workflow::VerificationReport& r) {
  return r.valid ? int8_t(-1) : int8_t(*r.failing_check);
}

}  // namespace

Summary Summary::Of(std::vector<double> samples) {
  Summary s;
  s.count = samples.size();
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / double(samples.size());
  const size_t mid = samples.size() / 2;
  s.median = samples.size() % 2 ? samples[mid] : (samples[mid - 1] + samples[mid]) / 2;
  size_t rank = size_t(std::ceil(0.95 * double(samples.size())));
  s.p95 = samples[std::clamp<size_t>(rank, 1, samples.size()) - 1];
  return s;
}

Interval WilsonInterval(size_t successes, size_t trials, double z) {
  if (trials == 0) return {0, 1};
  const double n = double(trials);
  const double p = double(successes) / n;
  const double z2 = z * z;
  const double center = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {successes == 0 ? 0.0 : std::max(0.0, center - half),
          successes >= trials ? 1.0 : std::min(1.0, center + half)};
}

double ChiSquareUniformPValue(std::span<const uint64_t> counts) {
  if (counts.size() < 2)
    throw Error(ErrorCode::kInvalidArgument, "chi-square needs at least two cells");
  const double total = double(std::accumulate(counts.begin(), counts.end(), uint64_t{0}));
  if (total == 0) throw Error(ErrorCode::kInvalidArgument, "chi-square over zero draws");
  const double expected = total / double(counts.size());
  double stat = 0;
  for (uint64_t c : counts) stat += (double(c) - expected) * (double(c) - expected) / expected;
  return boost::math::gamma_q(double(counts.size() - 1) / 2, stat / 2);
}

// ---- Bench ----

void BenchConfig::Validate() const {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be at least 1");
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "m must be at least 1");
  if (puf_latency_ms < 0) throw Error(ErrorCode::kInvalidArgument, "negative latency");
}

BenchReport BenchPipeline(const BenchConfig& config) {
  config.Validate();
  workflow::SimConfig sim_config;
  sim_config.params.n_bits = config.n;
  sim_config.params.latency_ms = config.puf_latency_ms;
  sim_config.params.simulate_latency = config.puf_latency_ms > 0;
  sim_config.seed = config.seed;

  BenchReport report;
  report.config = config;
  Simulation sim = Simulation::Bootstrap("bench-root", config.M, "", config.m, sim_config);

  auto evaluations = [&sim] {
    uint64_t total = 0;
    for (const std::string& name : sim.ca_names())
      for (const auto& [id, count] : sim.ca(name).group.selection_counts()) total += count;
    return total;
  };
  const uint64_t bootstrap_evals = evaluations();

  std::vector<workflow::IssueResult> issued;
  std::vector<double> issue, sign, log;
  for (size_t t = 0; t < config.trials; ++t) {
    auto start = std::chrono::steady_clock::now();
    issued.push_back(sim.IssueDomain(sim.lowest_ca(), "bench-" + std::to_string(t) + ".example"));
    issue.push_back(MsSince(start));
    sign.push_back(issued.back().sign_ms);
    log.push_back(issued.back().log_ms);
  }
  report.issue_puf_evaluations = evaluations() - bootstrap_evals;
  // Root self-signature, one per intermediate, one for the domain.
  report.chain_puf_evaluations = bootstrap_evals + report.issue_puf_evaluations / config.trials;
  report.chain_puf_latency_ms = double(report.chain_puf_evaluations) * config.puf_latency_ms;

  std::vector<double> verify_chain, verify;
  for (const workflow::IssueResult& r : issued) {
    pivlog::StapledBundle bundle = sim.BundleFor(r);
    auto start = std::chrono::steady_clock::now();
    workflow::VerificationReport chain_only =
        workflow::VerifySignatureChain(bundle.cert_chain, bundle.piv_chain, sim.trust_store());
    verify_chain.push_back(MsSince(start));
    start = std::chrono::steady_clock::now();
    workflow::VerificationReport full = sim.Verify(bundle);
    verify.push_back(MsSince(start));
    if (!full.valid || !chain_only.valid) ++report.invalid_verdicts;
    report.bundle_bytes = bundle.Encode().size();
    report.piv_chain_bytes = pivlog::EncodePivChain(bundle.piv_chain).size();
  }
  report.issue_ms = Summary::Of(std::move(issue));
  report.sign_ms = Summary::Of(std::move(sign));
  report.log_ms = Summary::Of(std::move(log));
  report.verify_chain_ms = Summary::Of(std::move(verify_chain));
  report.verify_ms = Summary::Of(std::move(verify));
  return report;
}

std::string BenchReport::ToText() const {
  std::ostringstream out;
  out << "bench M=" << config.M << " m=" << config.m << " n=" << config.n
      << " latency_ms=" << config.puf_latency_ms << " trials=" << config.trials
      << " seed=" << config.seed << "\n"
      << "issue_ms        " << Fmt(issue_ms) << "\n"
      << "sign_ms         " << Fmt(sign_ms) << "\n"
      << "log_ms          " << Fmt(log_ms) << "\n"
      << "verify_chain_ms " << Fmt(verify_chain_ms) << "\n"
      << "verify_ms       " << Fmt(verify_ms) << "\n"
      << "chain_puf_evaluations=" << chain_puf_evaluations
      << " chain_puf_latency_ms=" << chain_puf_latency_ms
      << " issue_puf_evaluations=" << issue_puf_evaluations << "\n"
      << "bundle_bytes=" << bundle_bytes << " piv_chain_bytes=" << piv_chain_bytes
      << " invalid_verdicts=" << invalid_verdicts << "\n";
  return out.str();
}

std::string BenchReport::ToCsv() const {
  std::ostringstream out;
  out << "metric,mean,median,p95,count\n";
  auto row = [&out](const char* name, const Summary& s) {
    out << name << ',' << s.mean << ',' << s.median << ',' << s.p95 << ',' << s.count << "\n";
  };
  row("issue_ms", issue_ms);
  row("sign_ms", sign_ms);
  row("log_ms", log_ms);
  row("verify_chain_ms", verify_chain_ms);
  row("verify_ms", verify_ms);
  return out.str();
}

// ---- Forgery ----

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kRandomSig: return "random-sig";
    case Strategy::kSplice: return "splice";
    case Strategy::kStrippedReplay: return "stripped-r-replay";
  }
  return "unknown";
}

void AdversaryConfig::Validate() const {
  if (n != 8 && n != 16 && n != 256)
    throw Error(ErrorCode::kInvalidArgument, "toy n must be 8 or 16 (256 for the smoke run)");
  if (l < 2) throw Error(ErrorCode::kInvalidArgument, "chain length l must be at least 2");
  if (q < 1) throw Error(ErrorCode::kInvalidArgument, "q must be at least 1");
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be at least 1");
}

double AdversaryConfig::Bound() const {
  const double ql = double(q) * double(l);
  return 4.0 * ql * ql / std::ldexp(1.0, int(n));
}

namespace {

struct TrialOutcome {
  uint8_t strategy = 0;
  bool success = false;
  bool chain_only = false;
};

struct Honest {
  workflow::TrustStore store;
  workflow::RevocationList crl;
  uint64_t now = 0;
  std::vector<pivlog::StapledBundle> bundles;
  std::vector<Word> issuer_pi;  // pi of the domain's issuer
};

Honest HonestSetup(const AdversaryConfig& config) {
  workflow::SimConfig sim_config;
  sim_config.params.n_bits = config.n;
  sim_config.seed = config.seed;
  Simulation sim = Simulation::Bootstrap("toy-root", config.l - 2, "", 4, sim_config);
  std::vector<workflow::IssueResult> issued;
  for (size_t k = 0; k < config.q; ++k)
    issued.push_back(sim.IssueDomain(sim.lowest_ca(), "q" + std::to_string(k) + ".example"));
  Honest h;
  for (const workflow::IssueResult& r : issued) {
    h.bundles.push_back(sim.BundleFor(r));
    const auto& up = r.chain.certs[r.chain.size() - 2];
    h.issuer_pi.push_back(Word::FromBytes(up.entries.subject_pk));
  }
  h.store = sim.trust_store();
  h.crl = sim.crl();
  h.now = sim.Now();
  return h;
}

TrialOutcome RunTrial(const Honest& honest, const AdversaryConfig& config, size_t index,
                      uint64_t seed) {
  Rng rng(seed);
  const size_t n = config.n;
  TrialOutcome out;
  out.strategy = uint8_t(index % kStrategyCount);
  const size_t victim = size_t(rng.Uniform(config.q));
  pivlog::StapledBundle forged = honest.bundles[victim];
  cert::PufCertificate& leaf = forged.cert_chain.certs.back();
  pivlog::Piv& leaf_piv = forged.piv_chain.pivs.back();

  // Entries that were never submitted to the issuer.
  leaf.entries.subject = "forged-" + std::to_string(index) + ".example";
  leaf.entries.serial = cert::RandomSerial(rng);

  switch (Strategy(out.strategy)) {
    case Strategy::kRandomSig:
      leaf.sig = rng.RandomWord(n);
      break;
    case Strategy::kSplice: {
      size_t donor = config.q > 1 ? (victim + 1 + size_t(rng.Uniform(config.q - 1))) % config.q
                                  : victim;
      leaf.sig = honest.bundles[donor].cert_chain.certs.back().sig;
      break;
    }
    case Strategy::kStrippedReplay: {
      // Every value used here is recoverable from the public bundle.
      workflow::VerificationReport walk = workflow::VerifySignatureChain(
          honest.bundles[victim].cert_chain, honest.bundles[victim].piv_chain, honest.store);
      if (!walk.valid) break;
      const size_t L = forged.cert_chain.size();
      const Word& r_up = walk.recovered_responses[L - 2];
      const Word h_up = r_up ^ forged.cert_chain.certs[L - 2].sig;
      const Word& r_leaf = walk.recovered_responses[L - 1];
      leaf.ext_rp = rng.RandomWord(n);
      leaf_piv.z_rp_complement = honest.issuer_pi[victim] ^ *leaf.ext_rp;
      Word hc = cert::ComputeHc(leaf.entries, leaf_piv.z_ts, leaf_piv.z_ca_name, n);
      leaf.sig = r_leaf ^ HashBits(n, r_up, hc, h_up);
      leaf_piv.tag = pivlog::ComputePivTag(r_leaf, leaf_piv.EncodeZ(), leaf.Encode(),
                                           forged.piv_chain.pivs[L - 2].tag);
      break;
    }
  }
  out.chain_only =
      workflow::VerifySignatureChain(forged.cert_chain, forged.piv_chain, honest.store).valid;
  out.success = workflow::VerifyBundle(forged, honest.store, honest.now, honest.crl).valid;
  return out;
}

}  // namespace

ForgeryReport ForgeryExperiment(const AdversaryConfig& config, bool parallel) {
  config.Validate();
  const Honest honest = HonestSetup(config);
  auto trial = [&](size_t i, uint64_t seed) { return RunTrial(honest, config, i, seed); };
  const uint64_t trial_seed = Rng::Derive(config.seed, 0xF0F0);
  std::vector<TrialOutcome> outcomes =
      parallel ? kernels::RunTrialsParallel<TrialOutcome>(config.trials, trial_seed, trial)
               : kernels::RunTrialsSerial<TrialOutcome>(config.trials, trial_seed, trial);

  ForgeryReport report;
  report.config = config;
  report.trials = outcomes.size();
  for (const TrialOutcome& o : outcomes) {
    StrategyOutcome& s = report.by_strategy[o.strategy];
    ++s.trials;
    s.successes += o.success;
    s.chain_only_successes += o.chain_only;
    report.successes += o.success;
  }
  report.rate = double(report.successes) / double(report.trials);
  report.ci = WilsonInterval(report.successes, report.trials);
  report.bound = config.Bound();
  return report;
}

std::string ForgeryReport::ToText() const {
  std::ostringstream out;
  out << "forgery n=" << config.n << " q=" << config.q << " l=" << config.l
      << " trials=" << trials << " seed=" << config.seed << "\n"
      << "successes=" << successes << " rate=" << rate << " wilson95=[" << ci.low << ", "
      << ci.high << "] bound=" << bound << (rate <= bound ? " (within bound)" : " (EXCEEDS bound)")
      << "\n";
  for (size_t s = 0; s < kStrategyCount; ++s)
    out << "  " << StrategyName(Strategy(s)) << ": trials=" << by_strategy[s].trials
        << " successes=" << by_strategy[s].successes
        << " chain_only_successes=" << by_strategy[s].chain_only_successes << "\n";
  return out.str();
}

std::string ForgeryReport::ToCsv() const {
  std::ostringstream out;
  out << "strategy,trials,successes,chain_only_successes\n";
  for (size_t s = 0; s < kStrategyCount; ++s)
    out << StrategyName(Strategy(s)) << ',' << by_strategy[s].trials << ','
        << by_strategy[s].successes << ',' << by_strategy[s].chain_only_successes << "\n";
  out << "total," << trials << ',' << successes << ",\n";
  return out.str();
}

// ---- Tamper sweep ----

std::vector<Mutation> ExhaustiveByteMutations(size_t size, uint64_t seed) {
  std::vector<Mutation> out(size);
  for (size_t p = 0; p < size; ++p)
    out[p] = {p, uint8_t(Rng::Derive(seed, p) % 255 + 1)};
  return out;
}

std::vector<Mutation> RandomBitFlips(size_t size, size_t count, uint64_t seed) {
  if (size == 0) throw Error(ErrorCode::kInvalidArgument, "nothing to flip");
  Rng rng(seed);
  std::vector<Mutation> out(count);
  for (Mutation& m : out) m = {size_t(rng.Uniform(size)), uint8_t(1u << rng.Uniform(8))};
  return out;
}

namespace {

int8_t RunMutation(ByteView bundle, const Mutation& m, const workflow::TrustStore& store,
                   uint64_t now, const workflow::RevocationList& crl) {
  if (m.position >= bundle.size() || m.mask == 0)
    throw Error(ErrorCode::kInvalidArgument, "mutation outside the bundle or empty");
  Bytes copy(bundle.begin(), bundle.end());
  copy[m.position] ^= m.mask;
  return Outcome(workflow::VerifyBundleBytes(copy, store, now, crl));
}

}  // namespace

TamperOutcomes TamperSweepSerial(ByteView bundle, std::span<const Mutation> mutations,
                                 const workflow::TrustStore& store, uint64_t now,
                                 const workflow::RevocationList& crl) {
  TamperOutcomes out(mutations.size());
  for (size_t i = 0; i < mutations.size(); ++i)
    out[i] = RunMutation(bundle, mutations[i], store, now, crl);
  return out;
}

TamperOutcomes TamperSweepParallel(ByteView bundle, std::span<const Mutation> mutations,
                                   const workflow::TrustStore& store, uint64_t now,
                                   const workflow::RevocationList& crl) {
  return kernels::RunTrialsParallel<int8_t>(
      mutations.size(), 0, [&](size_t i, uint64_t) {
        return RunMutation(bundle, mutations[i], store, now, crl);
      });
}

TamperSummary Summarize(const TamperOutcomes& outcomes) {
  TamperSummary s;
  s.total = outcomes.size();
  for (int8_t o : outcomes) {
    if (o < 0) continue;
    ++s.invalid;
    ++s.by_check[std::string(workflow::CheckName(FailingCheck(o)))];
  }
  return s;
}

// ---- Completeness and rotation ----

CompletenessResult RunCompleteness(size_t M, size_t m, size_t runs, uint64_t seed, size_t n_bits,
                                   bool parallel) {
  struct Run {
    bool valid = false;
    std::string failure;
  };
  auto one = [&](size_t i, uint64_t run_seed) {
    workflow::SimConfig config;
    config.params.n_bits = n_bits;
    config.seed = run_seed;
    Simulation sim = Simulation::Bootstrap("root", M, "d" + std::to_string(i) + ".example", m,
                                           config);
    Bytes wire_bundle = sim.BundleFor(*sim.first_issue()).Encode();
    workflow::VerificationReport r =
        workflow::VerifyBundleBytes(wire_bundle, sim.trust_store(), sim.Now(), sim.crl());
    return Run{r.valid, r.valid ? "" : r.Summary()};
  };
  std::vector<Run> results = parallel ? kernels::RunTrialsParallel<Run>(runs, seed, one)
                                      : kernels::RunTrialsSerial<Run>(runs, seed, one);
  CompletenessResult out;
  out.runs = runs;
  for (const Run& r : results) {
    out.valid += r.valid;
    if (!r.valid && out.first_failure.empty()) out.first_failure = r.failure;
  }
  return out;
}

RotationResult RotationUniformity(size_t m, size_t draws, uint64_t seed) {
  Rng rng(seed);
  puf::PufParams params;
  puf::PufGroup group = puf::PufGroup::Create("rotation", m, params, rng);
  for (size_t i = 0; i < draws; ++i) group.SelectInstance();
  RotationResult out;
  for (const puf::PufInstance& p : group.instances()) {
    auto it = group.selection_counts().find(p.id());
    out.counts.push_back(it == group.selection_counts().end() ? 0 : it->second);
  }
  out.p_value = ChiSquareUniformPValue(out.counts);
  return out;
}

}  // namespace acore::harness
