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

// acore: command line front end over a state directory.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "acore/bundle.h"
#include "acore/error.h"
#include "acore/harness.h"
#include "acore/log.h"
#include "acore/puf.h"
#include "acore/wire.h"
#include "acore/workflow.h"

namespace fs = std::filesystem;
using namespace acore;

namespace {

uint64_t WallClockMs() {
  return uint64_t(std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count());
}

workflow::SimConfig CliConfig(size_t n_bits) {
  workflow::SimConfig config;
  config.params.n_bits = n_bits;
  config.seed = EntropySeed();
  config.clock = WallClockMs;
  return config;
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out || !(out << text)) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

cert::Serial ParseSerial(const std::string& hex) {
  Bytes raw = FromHex(hex);
  cert::Serial s{};
  if (raw.size() != s.size()) throw Error(ErrorCode::kInvalidArgument, "serial is 16 hex digits");
  std::copy(raw.begin(), raw.end(), s.begin());
  return s;
}

pivlog::TreeKind ParseTree(const std::string& name) {
  if (name == "cert") return pivlog::TreeKind::kCert;
  if (name == "piv") return pivlog::TreeKind::kPiv;
  throw Error(ErrorCode::kInvalidArgument, "tree is cert or piv");
}

void PrintHead(const std::string& label, const pivlog::SignedHead& h) {
  std::cout << label << " size=" << h.tree_size << " root=" << h.root.Hex()
            << " ts=" << h.timestamp << " tag=" << h.tag.Hex() << "\n";
}

workflow::Simulation LoadState(const fs::path& dir) {
  if (!fs::exists(dir / "log.aclg"))
    throw Error(ErrorCode::kIo, "no state in " + dir.string() + "; run init-root first");
  // The hash width comes from the persisted log, the rest from the groups.
  Bytes file;
  {
    std::ifstream in(dir / "log.aclg", std::ios::binary);
    file.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto log = pivlog::TransparencyLog::Deserialize(file, WallClockMs);
  return workflow::Simulation::Load(dir, CliConfig(log.hash_bits()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keyless PUF certificate authority toolkit"};
  app.require_subcommand(1);
  std::string state = "acore-state";
  app.add_option("--state", state, "State directory")->capture_default_str();

  // init-root
  auto* init = app.add_subcommand("init-root", "Create a root CA with a fresh PUF group");
  std::string root_name;
  size_t root_m = 4, n_bits = 256;
  init->add_option("--name", root_name, "Root CA name")->required();
  init->add_option("--instances", root_m, "PUF instances in the group")->capture_default_str();
  init->add_option("--n", n_bits, "Response length in bits")->capture_default_str();

  // ca new
  auto* ca = app.add_subcommand("ca", "Manage intermediate CAs");
  ca->require_subcommand(1);
  auto* ca_new = ca->add_subcommand("new", "Create a CA issued by --parent");
  std::string ca_name, ca_parent;
  size_t ca_m = 4;
  ca_new->add_option("--name", ca_name, "CA name")->required();
  ca_new->add_option("--parent", ca_parent, "Issuing CA")->required();
  ca_new->add_option("--instances", ca_m, "PUF instances in the group")->capture_default_str();

  // issue
  auto* issue = app.add_subcommand("issue", "Validate a domain and issue its certificate");
  std::string issue_domain, issue_ca, issue_out, issue_pk;
  issue->add_option("--domain", issue_domain, "Domain name")->required();
  issue->add_option("--ca", issue_ca, "Issuing CA (default: the newest CA)");
  issue->add_option("--out", issue_out, "Bundle output path (default: <domain>.bundle)");
  issue->add_option("--pk", issue_pk, "Domain public key, hex (default: random)");

  // verify
  auto* verify = app.add_subcommand("verify", "Verify a stapled bundle offline");
  std::string verify_bundle, verify_store, verify_crl;
  std::optional<uint64_t> verify_now;
  verify->add_option("--bundle", verify_bundle, "Bundle file")->required();
  verify->add_option("--trust-store", verify_store, "Trust store (default: <state>/trust.acts)");
  verify->add_option("--crl", verify_crl, "CRL (default: <state>/crl.acrl if present)");
  verify->add_option("--now", verify_now, "Verification time, epoch ms");

  // revoke
  auto* revoke = app.add_subcommand("revoke", "Revoke a serial or a failed PUF instance");
  std::string revoke_ca, revoke_serial, revoke_instance;
  uint64_t revoke_since = 0;
  revoke->add_option("--ca", revoke_ca, "Issuing CA")->required();
  auto* serial_opt = revoke->add_option("--serial", revoke_serial, "Serial, 16 hex digits");
  auto* instance_opt = revoke->add_option("--instance", revoke_instance, "PUF instance id");
  revoke->add_option("--since", revoke_since, "Revoke serials issued at or after, epoch ms");
  serial_opt->excludes(instance_opt);

  // log
  auto* log = app.add_subcommand("log", "Transparency log operations");
  log->require_subcommand(1);
  auto* log_submit = log->add_subcommand("submit", "Append an armored certificate and PIV");
  std::string submit_cert, submit_piv, submit_as;
  log_submit->add_option("--cert", submit_cert, "Certificate file")->required();
  log_submit->add_option("--piv", submit_piv, "PIV file")->required();
  log_submit->add_option("--submitter", submit_as, "Submitting CA")->required();
  auto* log_prove = log->add_subcommand("prove", "Inclusion or consistency proof");
  std::string prove_tree = "cert";
  std::optional<uint64_t> prove_index, prove_old, prove_new;
  log_prove->add_option("--tree", prove_tree, "cert or piv")->capture_default_str();
  log_prove->add_option("--index", prove_index, "Leaf index");
  log_prove->add_option("--old", prove_old, "Old tree size");
  log_prove->add_option("--new", prove_new, "New tree size");
  auto* log_head = log->add_subcommand("head", "Current signed heads");
  auto* log_audit = log->add_subcommand("audit", "Monitor scan of the whole log");

  // puf-stats
  auto* stats = app.add_subcommand("puf-stats", "Statistical suite over simulated PUFs");
  size_t stats_n = 256, stats_instances = 16, stats_challenges = 1000;
  uint64_t stats_seed = 1;
  double stats_noise = 0;
  stats->add_option("--n", stats_n)->capture_default_str();
  stats->add_option("--instances", stats_instances)->capture_default_str();
  stats->add_option("--challenges", stats_challenges)->capture_default_str();
  stats->add_option("--noise", stats_noise)->capture_default_str();
  stats->add_option("--seed", stats_seed)->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "Issue/log/verify pipeline timings");
  harness::BenchConfig bench_config;
  std::string bench_csv;
  bench->add_option("--M", bench_config.M, "Intermediate CAs")->capture_default_str();
  bench->add_option("--m", bench_config.m, "Instances per CA")->capture_default_str();
  bench->add_option("--n", bench_config.n, "Response bits")->capture_default_str();
  bench->add_option("--latency", bench_config.puf_latency_ms, "PUF latency, ms")
      ->capture_default_str();
  bench->add_option("--trials", bench_config.trials)->capture_default_str();
  bench->add_option("--seed", bench_config.seed)->capture_default_str();
  bench->add_option("--csv", bench_csv, "Also write a CSV report");

  // attack
  auto* attack = app.add_subcommand("attack", "Toy-parameter forgery experiment");
  harness::AdversaryConfig adv;
  std::string attack_csv;
  attack->add_option("--toy-n", adv.n, "Response bits (8, 16; 256 for a smoke run)")
      ->capture_default_str();
  attack->add_option("--q", adv.q, "Honest issuances")->capture_default_str();
  attack->add_option("--l", adv.l, "Chain length")->capture_default_str();
  attack->add_option("--trials", adv.trials)->capture_default_str();
  attack->add_option("--seed", adv.seed)->capture_default_str();
  attack->add_option("--csv", attack_csv, "Also write a CSV report");

  CLI11_PARSE(app, argc, argv);
  const fs::path dir(state);

  try {
    if (*init) {
      if (fs::exists(dir / "log.aclg"))
        throw Error(ErrorCode::kInvalidArgument, "state already initialized in " + state);
      workflow::Simulation sim(CliConfig(n_bits));
      sim.InitRoot(root_name, root_m);
      sim.Save(dir);
      const auto& root = sim.ca(root_name);
      std::cout << "root " << root_name << " pi=" << root.group.group_proof().Hex()
                << "\nfingerprint " << ToHex(root.chain.certs[0].Fingerprint()) << "\n";
      WriteText(dir / (root_name + ".cert"),
                wire::Armor("CERTIFICATE", root.chain.certs[0].Encode()));
    } else if (*ca_new) {
      auto sim = LoadState(dir);
      const auto& created = sim.CreateCa(ca_parent, ca_name, ca_m);
      std::cout << "ca " << ca_name << " under " << ca_parent
                << " pi=" << created.group.group_proof().Hex() << "\n";
      sim.Save(dir);
    } else if (*issue) {
      auto sim = LoadState(dir);
      if (issue_ca.empty()) issue_ca = sim.lowest_ca();
      std::optional<Bytes> pk;
      if (!issue_pk.empty()) pk = FromHex(issue_pk);
      workflow::IssueResult r = sim.IssueDomain(issue_ca, workflow::DomainActor{issue_domain}, pk);
      sim.Save(dir);
      fs::path out = issue_out.empty() ? fs::path(issue_domain + ".bundle") : fs::path(issue_out);
      WriteText(out, wire::Armor("BUNDLE", sim.BundleFor(r).Encode()));
      fs::path stem = out;
      stem.replace_extension();
      WriteText(stem.string() + ".cert", wire::Armor("CERTIFICATE", r.cert.Encode()));
      WriteText(stem.string() + ".piv", wire::Armor("PIV", r.piv.Encode()));
      std::cout << "issued " << issue_domain << " serial=" << ToHex(r.cert.entries.serial)
                << " by " << issue_ca << " leaf=" << r.leaf_index << "\nbundle " << out.string()
                << "\n";
    } else if (*verify) {
      Bytes bundle = wire::Dearmor("BUNDLE", ReadText(verify_bundle));
      fs::path store_path = verify_store.empty() ? dir / "trust.acts" : fs::path(verify_store);
      std::ifstream sin(store_path, std::ios::binary);
      if (!sin) throw Error(ErrorCode::kIo, "cannot open " + store_path.string());
      auto store = workflow::TrustStore::Deserialize(Bytes(std::istreambuf_iterator<char>(sin), {}));
      workflow::RevocationList crl;
      fs::path crl_path = verify_crl.empty() ? dir / "crl.acrl" : fs::path(verify_crl);
      if (fs::exists(crl_path)) {
        std::ifstream cin(crl_path, std::ios::binary);
        crl = workflow::RevocationList::Deserialize(Bytes(std::istreambuf_iterator<char>(cin), {}));
      } else if (!verify_crl.empty()) {
        throw Error(ErrorCode::kIo, "cannot open " + crl_path.string());
      }
      auto report = workflow::VerifyBundleBytes(bundle, store, verify_now.value_or(WallClockMs()), crl);
      std::cout << report.Summary() << "\n";
      return report.valid ? 0 : 1;
    } else if (*revoke) {
      auto sim = LoadState(dir);
      if (!revoke_serial.empty()) {
        sim.Revoke(revoke_ca, ParseSerial(revoke_serial));
        std::cout << "revoked " << revoke_ca << "/" << revoke_serial << "\n";
      } else if (!revoke_instance.empty()) {
        sim.RevokeInstance(revoke_ca, revoke_instance, revoke_since);
        std::cout << "revoked instance " << revoke_instance << "; " << revoke_ca
                  << " pi=" << sim.ca(revoke_ca).group.group_proof().Hex() << "\n";
      } else {
        throw Error(ErrorCode::kInvalidArgument, "give --serial or --instance");
      }
      sim.Save(dir);
    } else if (*log_submit) {
      auto sim = LoadState(dir);
      Bytes c = wire::Dearmor("CERTIFICATE", ReadText(submit_cert));
      Bytes p = wire::Dearmor("PIV", ReadText(submit_piv));
      cert::PufCertificate::Decode(c);
      pivlog::Piv::Decode(p);
      auto res = sim.log().Append(submit_as, c, p);
      sim.trust_store().AddKnownHead(pivlog::TreeKind::kCert, res.cert_head);
      sim.trust_store().AddKnownHead(pivlog::TreeKind::kPiv, res.piv_head);
      sim.Save(dir);
      std::cout << "leaf " << res.leaf_index << "\n";
      PrintHead("cert", res.cert_head);
      PrintHead("piv", res.piv_head);
    } else if (*log_prove) {
      auto sim = LoadState(dir);
      pivlog::TreeKind tree = ParseTree(prove_tree);
      pivlog::LogProof proof;
      if (prove_index) {
        proof = sim.log().InclusionProof(tree, *prove_index, prove_new);
      } else if (prove_old) {
        proof = sim.log().ConsistencyProof(tree, *prove_old, prove_new.value_or(sim.log().size()));
      } else {
        throw Error(ErrorCode::kInvalidArgument, "give --index or --old");
      }
      std::cout << wire::Armor("PROOF", proof.Encode());
    } else if (*log_head) {
      auto sim = LoadState(dir);
      PrintHead("cert", sim.log().Head(pivlog::TreeKind::kCert));
      PrintHead("piv", sim.log().Head(pivlog::TreeKind::kPiv));
    } else if (*log_audit) {
      auto sim = LoadState(dir);
      pivlog::AuditReport report = sim.log().Audit();
      std::cout << "tree_size " << report.tree_size << "\n";
      for (const auto& [name, count] : report.invocations_per_ca)
        std::cout << "ca " << name << " invocations=" << count << "\n";
      for (const auto& f : report.findings)
        std::cout << "finding " << pivlog::FindingName(f.kind) << " " << pivlog::TreeName(f.tree)
                  << "[" << f.index << "] " << f.detail << "\n";
      std::cout << (report.clean() ? "clean" : "findings") << "\n";
      return report.clean() ? 0 : 1;
    } else if (*stats) {
      puf::PufParams params;
      params.n_bits = stats_n;
      params.noise_rate = stats_noise;
      auto report = puf::RunStatSuite(params, stats_instances, stats_challenges, stats_seed);
      std::cout << "n=" << report.n_bits << " samples=" << report.sample_count
                << "\nmean_inter_hd=" << report.mean_inter_hd
                << "\nmean_intra_hd=" << report.mean_intra_hd
                << "\nmax_bias_deviation=" << report.MaxBiasDeviation() << "\n";
    } else if (*bench) {
      auto report = harness::BenchPipeline(bench_config);
      std::cout << report.ToText();
      if (!bench_csv.empty()) WriteText(bench_csv, report.ToCsv());
    } else if (*attack) {
      auto report = harness::ForgeryExperiment(adv);
      std::cout << report.ToText();
      if (!attack_csv.empty()) WriteText(attack_csv, report.ToCsv());
    }
  } catch (const Error& e) {
    std::cerr << "acore: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
