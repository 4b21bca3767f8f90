// Copyright 2026 The clustered-fu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfu/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "cfu/bounds.h"
#include "cfu/cohort.h"
#include "cfu/fltrain.h"
#include "cfu/montecarlo.h"
#include "cfu/rng.h"
#include "cfu/secagg.h"
#include "cfu/status.h"
#include "cfu/unlearning.h"

namespace cfu {
namespace {

constexpr uint64_t kAssignTag = 101;
constexpr uint64_t kPopulationTag = 102;
constexpr uint64_t kRequestTag = 103;
constexpr uint64_t kRoundTag = 104;
constexpr uint64_t kMonteCarloTag = 105;
constexpr int kReportDim = 8;

// Reference cluster size for N=200, gamma=delta=zeta=0.1, xi=0.7,
// sigma=eta=40.
constexpr int64_t kReferenceK = 60;

bool IsReferenceConfig(const SystemParams& p) {
  return p.n_users == 200 && p.frac_adversarial == 0.1 &&
         p.frac_dropout == 0.1 && p.frac_unlearn_per_cluster == 0.1 &&
         p.shamir_rate == 0.7 && p.security_bits == 40 &&
         p.correctness_bits == 40;
}

std::string Opt(const std::optional<int64_t>& v) {
  return v.has_value() ? absl::StrCat(*v) : "none";
}

std::string Sanitize(absl::string_view message) {
  std::string out(message);
  for (char& c : out) {
    if (c == '"' || c == '\n') c = '\'';
  }
  return out;
}

RunOutcome Failure(const absl::Status& status) {
  return {ExitCodeFor(status),
          absl::StrFormat("summary status=error exit=%d reason=\"%s\"",
                          ExitCodeFor(status), Sanitize(status.message())),
          {}};
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::string dir) : dir_(std::move(dir)) {}

  absl::Status Write(const std::string& name, absl::string_view contents) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("cannot create ", dir_, ": ",
                                    ec.message()));
    }
    const std::filesystem::path path = std::filesystem::path(dir_) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("cannot write ", path.string()));
    }
    written_.push_back(name);
    return absl::OkStatus();
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  std::string dir_;
  std::vector<std::string> written_;
};

std::string PlanText(const SystemParams& p, const ParGenResult& r) {
  std::string out = absl::StrFormat(
      "n_users=%d\ngamma=%g\ndelta=%g\nzeta=%g\nxi=%g\nsigma=%d\neta=%d\n"
      "k1=%d\nk2=%d\nk3=%d\nk=%d\ns=%d\nt=%d\nq=%d\n"
      "seq_guard=%.17g\nbat_denominator=%.17g\ntau_seq=%s\ntau_bat=%s\n",
      p.n_users, p.frac_adversarial, p.frac_dropout,
      p.frac_unlearn_per_cluster, p.shamir_rate, p.security_bits,
      p.correctness_bits, r.sizes.k1, r.sizes.k2, r.sizes.k3,
      r.sizes.cluster_size, r.sizes.n_clusters, r.plan.shamir_threshold,
      r.plan.max_unlearn_per_cluster, r.seq_guard, r.bat_denominator,
      Opt(r.plan.capacity_seq), Opt(r.plan.capacity_bat));
  if (!r.seq_status.ok()) {
    absl::StrAppend(&out, "seq_status=\"", Sanitize(r.seq_status.message()),
                    "\"\n");
  }
  if (!r.bat_status.ok()) {
    absl::StrAppend(&out, "bat_status=\"", Sanitize(r.bat_status.message()),
                    "\"\n");
  }
  return out;
}

std::string SizesSummary(const ParGenResult& r) {
  return absl::StrFormat("k=%d s=%d tau_seq=%s tau_bat=%s",
                         r.sizes.cluster_size, r.sizes.n_clusters,
                         Opt(r.plan.capacity_seq), Opt(r.plan.capacity_bat));
}

absl::StatusOr<ParGenResult> Plan(const SystemParams& p) {
  if (absl::Status s = p.Validate(); !s.ok()) return s;
  return ParGen(p);
}

RunOutcome RunPargen(const RunConfig& config, ArtifactWriter& writer) {
  absl::StatusOr<ParGenResult> r = Plan(config.params);
  if (!r.ok()) return Failure(r.status());
  std::string text = PlanText(config.params, *r);
  const bool guard_failed = !r->seq_status.ok() || !r->bat_status.ok();
  std::string summary =
      absl::StrCat("summary status=", guard_failed ? "GuardViolation" : "ok",
                   " ", SizesSummary(*r));
  if (IsReferenceConfig(config.params)) {
    const int64_t diff = r->sizes.cluster_size - kReferenceK;
    absl::StrAppend(&text, "reference_k=", kReferenceK, "\nk_delta=", diff,
                    "\n");
    absl::StrAppend(&summary, " reference_k=", kReferenceK,
                    " k_delta=", diff);
  }
  int code = kExitOk;
  if (guard_failed) {
    code = kExitGuard;
    absl::StrAppend(&summary, " guard=",
                    !r->seq_status.ok() ? "seq" : "",
                    !r->seq_status.ok() && !r->bat_status.ok() ? "," : "",
                    !r->bat_status.ok() ? "bat" : "");
  }
  if (absl::Status s = writer.Write("pargen.txt", text); !s.ok()) {
    return Failure(s);
  }
  return {code, summary, writer.written()};
}

std::string SecAggReport(const ClusterAssignment& a, const Population& pop,
                         const UnlearnState& state, int t, uint64_t seed) {
  std::string report = "# cfu secagg report v1\n";
  VertexSet adversarial;
  for (UserId u = 0; u < a.n_users(); ++u) {
    if (pop.adversarial[u]) adversarial.insert(u);
  }
  GraphCache cache;
  for (ClusterId c = 0; c < a.n_clusters(); ++c) {
    const std::vector<UserId>& members = a.members[c];
    Rng rng = MakeRng(seed, {kRoundTag, static_cast<uint64_t>(c)});
    RoundSpec spec;
    spec.cluster_id = c;
    spec.members = members;
    spec.threshold = t;
    spec.nonce = NonceFromUint(rng());
    int alive = 0;
    for (UserId u : members) {
      FieldVector x(kReportDim);
      for (FieldElement& e : x) e = kDefaultField.Uniform(rng);
      spec.inputs[u] = std::move(x);
      if (state.is_unlearned(u)) {
        spec.unlearned.insert(u);
      } else if (pop.dropped[u]) {
        spec.dropouts.insert(u);
      } else {
        ++alive;
      }
    }
    absl::StatusOr<const HararyGraph*> graph =
        cache.ForSize(static_cast<int>(members.size()));
    absl::StatusOr<RoundTranscript> tr =
        graph.ok() ? RunRound(spec, **graph, rng)
                   : absl::StatusOr<RoundTranscript>(graph.status());
    if (!tr.ok()) {
      report += FormatFailedRound(c, static_cast<int>(members.size()), alive,
                                  static_cast<int>(spec.dropouts.size()),
                                  tr.status());
      continue;
    }
    tr->privacy_findings = AuditPrivacy(*tr, adversarial);
    report += FormatTranscript(*tr);
  }
  return report;
}

RunOutcome RunSimulate(const RunConfig& config, ArtifactWriter& writer) {
  const UnlearnMode mode = config.mode == RunMode::kSimulateSeq
                               ? UnlearnMode::kSequential
                               : UnlearnMode::kBatch;
  absl::StatusOr<ParGenResult> plan = Plan(config.params);
  if (!plan.ok()) return Failure(plan.status());
  const SystemParams& p = config.params;
  const int n = static_cast<int>(p.n_users);

  Rng assign_rng = MakeRng(config.seed, {kAssignTag});
  absl::StatusOr<ClusterAssignment> a =
      AssignClusters(n, static_cast<int>(plan->plan.cluster_size),
                     static_cast<int>(plan->plan.n_clusters), assign_rng);
  if (!a.ok()) return Failure(a.status());
  Rng pop_rng = MakeRng(config.seed, {kPopulationTag});
  Population pop =
      SamplePopulation(n, p.frac_adversarial, p.frac_dropout, pop_rng);

  absl::StatusOr<UnlearnState> state =
      UnlearnState::Create(plan->plan, *a, mode);
  if (!state.ok()) {
    RunOutcome out = Failure(state.status());
    absl::StrAppend(&out.summary, " ", SizesSummary(*plan));
    return out;
  }

  Rng request_rng = MakeRng(config.seed, {kRequestTag});
  const TargetPolicy policy;
  std::vector<bool> chosen(n, false);
  absl::Status stop;
  int64_t drawn = 0;
  std::vector<UserId> batch;
  for (; drawn < config.requests; ++drawn) {
    std::vector<bool> exclude = chosen;
    for (UserId u = 0; u < n; ++u) {
      exclude[u] = exclude[u] || state->is_unlearned(u);
    }
    UserId target = -1;
    for (int attempt = 0; attempt < 1000 && target < 0; ++attempt) {
      target = DrawUnlearnTarget(*a, pop, policy, exclude, request_rng);
    }
    if (target < 0) {
      stop = MakeError(ErrorKind::kInvalidArgument,
                       "no eligible unlearning target left");
      break;
    }
    chosen[target] = true;
    if (mode == UnlearnMode::kBatch) {
      batch.push_back(target);
      continue;
    }
    absl::StatusOr<RetrainJob> job = state->ProcessSequential(target);
    if (job.ok() ||
        IsKind(job.status(), ErrorKind::kPerClusterBudgetExceeded)) {
      continue;
    }
    stop = job.status();
    break;
  }
  if (mode == UnlearnMode::kBatch && stop.ok()) {
    absl::StatusOr<std::vector<RetrainJob>> jobs = state->ProcessBatch(batch);
    if (!jobs.ok() &&
        !IsKind(jobs.status(), ErrorKind::kPerClusterBudgetExceeded)) {
      stop = jobs.status();
    }
  }

  const RetrainedStatistics stats = ComputeRetrainedStatistics(*state);
  std::string text = PlanText(p, *plan);
  absl::StrAppend(&text, "mode=", RunModeName(config.mode), "\nrequests=",
                  config.requests, "\nrequests_consumed=",
                  state->requests_consumed(), "\nrejected=", stats.rejected,
                  "\ntotal_retrained=", stats.total_retrained,
                  "\nmax_q=", stats.max_q, "\n");
  for (const auto& [q, count] : stats.q_histogram) {
    absl::StrAppend(&text, "q_histogram[", q, "]=", count, "\n");
  }
  if (!stop.ok()) {
    absl::StrAppend(&text, "stopped=\"", Sanitize(stop.message()), "\"\n");
  }

  for (const auto& [name, contents] :
       std::map<std::string, std::string>{
           {"retrain_log.csv", RetrainLogCsv(state->retrain_log())},
           {"simulate.txt", text},
           {"secagg_report.txt",
            SecAggReport(*a, pop, *state,
                         static_cast<int>(plan->plan.shamir_threshold),
                         config.seed)}}) {
    if (absl::Status s = writer.Write(name, contents); !s.ok()) {
      return Failure(s);
    }
  }

  const int code = stop.ok() ? kExitOk : ExitCodeFor(stop);
  std::string status =
      stop.ok() ? "ok" : std::string(ErrorKindName(*KindOf(stop)));
  return {code,
          absl::StrFormat("summary status=%s mode=%s %s accepted=%d "
                          "rejected=%d users_retrained=%d",
                          status, RunModeName(config.mode), SizesSummary(*plan),
                          std::count(state->unlearned().begin(),
                                     state->unlearned().end(), true),
                          stats.rejected,
                          stats.total_retrained),
          writer.written()};
}

RunOutcome RunMontecarlo(const RunConfig& config, const RunOptions& options,
                         ArtifactWriter& writer) {
  absl::StatusOr<ParGenResult> plan = Plan(config.params);
  if (!plan.ok()) return Failure(plan.status());
  EstimateOptions est;
  est.threads = options.threads;
  std::vector<EstimateReport> reports;
  std::vector<std::string> skipped;
  const uint64_t seed = DeriveSeed(config.seed, {kMonteCarloTag});
  for (Requirement req :
       {Requirement::kR1, Requirement::kR2, Requirement::kR3,
        Requirement::kR4Seq, Requirement::kR4Bat, Requirement::kJointSeq,
        Requirement::kJointBat}) {
    absl::StatusOr<EstimateReport> r = EstimateFailure(
        req, config.params, plan->plan, config.trials, seed, est);
    if (IsKind(r.status(), ErrorKind::kGuardViolation)) {
      skipped.push_back(RequirementName(req));
      continue;
    }
    if (!r.ok()) return Failure(r.status());
    reports.push_back(*std::move(r));
  }
  if (absl::Status s = writer.Write("montecarlo.csv", EstimateCsv(reports));
      !s.ok()) {
    return Failure(s);
  }
  int passed = 0;
  for (const EstimateReport& r : reports) passed += r.pass;
  std::string summary = absl::StrFormat(
      "summary status=ok %s trials=%d passed=%d/%d", SizesSummary(*plan),
      config.trials, passed, reports.size());
  if (!skipped.empty()) {
    absl::StrAppend(&summary, " skipped=", absl::StrJoin(skipped, ","));
  }
  return {skipped.empty() ? kExitOk : kExitGuard, summary, writer.written()};
}

RunOutcome RunSweep(const RunConfig& config, ArtifactWriter& writer) {
  const SystemParams& b = config.params;
  const ParameterGrid base{{b.n_users},
                           {b.frac_adversarial},
                           {b.frac_dropout},
                           {b.frac_unlearn_per_cluster},
                           {b.shamir_rate},
                           {b.security_bits},
                           {b.correctness_bits}};
  std::vector<ParameterGrid> grids(7, base);
  grids[0].sigma = {10, 20, 40};
  grids[0].eta = {10, 20, 40};
  grids[1].gamma = {0.05, 0.1, 0.2};
  grids[2].delta = {0.05, 0.1, 0.2};
  grids[3].zeta = {0.05, 0.1, 0.2};
  grids[4].n_users.clear();
  for (int64_t n = 100; n <= 1000; n += 100) grids[4].n_users.push_back(n);
  grids[5].xi = {0.6, 0.7, 0.8};
  // Small populations against high adversary fractions, where the required
  // cluster size can exceed N.
  grids[6].n_users = {25, 50, 100};
  grids[6].gamma = {0.05, 0.1, 0.2};

  std::vector<SweepRow> rows;
  for (const ParameterGrid& g : grids) {
    absl::StatusOr<std::vector<SweepRow>> part = Sweep(g);
    if (!part.ok()) return Failure(part.status());
    rows.insert(rows.end(), part->begin(), part->end());
  }
  if (absl::Status s = writer.Write("sweep.csv", SweepCsv(rows)); !s.ok()) {
    return Failure(s);
  }
  int feasible = 0;
  for (const SweepRow& r : rows) feasible += r.feasible;
  return {kExitOk,
          absl::StrFormat("summary status=ok points=%d feasible=%d",
                          rows.size(), feasible),
          writer.written()};
}

RunOutcome RunTrain(const RunConfig& config, ArtifactWriter& writer) {
  absl::StatusOr<ParGenResult> plan = Plan(config.params);
  if (!plan.ok()) return Failure(plan.status());
  const SystemParams& p = config.params;
  TaskParams task_params;
  task_params.n_users = static_cast<int>(p.n_users);
  task_params.seed = config.seed;
  absl::StatusOr<SyntheticTask> task = MakeSyntheticTask(task_params);
  if (!task.ok()) return Failure(task.status());

  Rng assign_rng = MakeRng(config.seed, {kAssignTag});
  absl::StatusOr<ClusterAssignment> a = AssignClusters(
      task_params.n_users, static_cast<int>(plan->plan.cluster_size),
      static_cast<int>(plan->plan.n_clusters), assign_rng);
  if (!a.ok()) return Failure(a.status());

  ClusterTrainConfig cfg;
  cfg.rounds = config.rounds;
  cfg.xi = p.shamir_rate;
  cfg.dropout_rate = p.frac_dropout;
  cfg.master_seed = config.seed;
  absl::StatusOr<FederationResult> result = TrainFederation(*task, *a, cfg);
  if (!result.ok()) return Failure(result.status());
  if (absl::Status s = writer.Write("metrics.csv", MetricsCsv(result->metrics));
      !s.ok()) {
    return Failure(s);
  }
  const double ensemble =
      result->metrics.empty() ? 0 : result->metrics.back().ensemble_accuracy;
  return {kExitOk,
          absl::StrFormat("summary status=ok %s rounds=%d aborted_rounds=%d "
                          "ensemble_accuracy=%.4f",
                          SizesSummary(*plan), config.rounds,
                          result->aborted_rounds, ensemble),
          writer.written()};
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  switch (KindOf(status).value_or(ErrorKind::kInvalidArgument)) {
    case ErrorKind::kInfeasibleParameters:
    case ErrorKind::kClusterTooSmall:
      return kExitInfeasible;
    case ErrorKind::kGuardViolation:
    case ErrorKind::kCapacityExhausted:
      return kExitGuard;
    default:
      return kExitInternal;
  }
}

RunOutcome Run(const RunConfig& config, const RunOptions& options) {
  if (absl::Status s = CheckRequiredKeys(config); !s.ok()) return Failure(s);
  ArtifactWriter writer(config.out);
  switch (config.mode) {
    case RunMode::kPargen:
      return RunPargen(config, writer);
    case RunMode::kSimulateSeq:
    case RunMode::kSimulateBat:
      return RunSimulate(config, writer);
    case RunMode::kMontecarlo:
      return RunMontecarlo(config, options, writer);
    case RunMode::kSweep:
      return RunSweep(config, writer);
    case RunMode::kTrain:
      return RunTrain(config, writer);
  }
  return Failure(MakeError(ErrorKind::kInvalidArgument, "unknown mode"));
}

absl::StatusOr<RunMode> ModeForCommand(absl::string_view command,
                                       absl::string_view selector,
                                       RunMode config_mode) {
  if (command == "simulate") {
    if (selector == "seq") return RunMode::kSimulateSeq;
    if (selector == "bat") return RunMode::kSimulateBat;
    if (!selector.empty()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("--mode must be seq or bat, got ",
                                    selector));
    }
    if (config_mode == RunMode::kSimulateSeq ||
        config_mode == RunMode::kSimulateBat) {
      return config_mode;
    }
    return MakeError(ErrorKind::kInvalidArgument,
                     "simulate needs --mode seq|bat or a simulate-* mode");
  }
  if (!selector.empty()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "--mode applies to simulate only");
  }
  for (RunMode m : {RunMode::kPargen, RunMode::kMontecarlo, RunMode::kSweep,
                    RunMode::kTrain}) {
    if (command == RunModeName(m)) return m;
  }
  return MakeError(ErrorKind::kInvalidArgument,
                   absl::StrCat("unknown command ", command));
}

}  // namespace cfu
