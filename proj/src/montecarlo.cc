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

#include "cfu/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "cfu/rng.h"
#include "cfu/status.h"
#include "cfu/unlearning.h"

namespace cfu {
namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr int kMaxTargetDraws = 1000;

bool NeedsSeq(Requirement r) {
  return r == Requirement::kR4Seq || r == Requirement::kJointSeq;
}
bool NeedsBat(Requirement r) {
  return r == Requirement::kR4Bat || r == Requirement::kJointBat;
}

// Marks up to q honest alive users of every cluster as unlearned.
void UnlearnWorstCase(const ClusterAssignment& a, int q, Population& pop,
                      Rng& rng) {
  for (const std::vector<UserId>& members : a.members) {
    std::vector<UserId> honest;
    for (UserId u : members) {
      if (!pop.adversarial[u] && !pop.dropped[u]) honest.push_back(u);
    }
    std::shuffle(honest.begin(), honest.end(), rng);
    const int take = std::min<int>(q, static_cast<int>(honest.size()));
    for (int i = 0; i < take; ++i) pop.unlearned[honest[i]] = true;
  }
}

UserId DrawTarget(const ClusterAssignment& a, const Population& pop,
                  const TargetPolicy& policy, const std::vector<bool>& exclude,
                  Rng& rng) {
  for (int i = 0; i < kMaxTargetDraws; ++i) {
    const UserId u = DrawUnlearnTarget(a, pop, policy, exclude, rng);
    if (u >= 0) return u;
  }
  return -1;
}

// True iff some request was rejected for exceeding q.
absl::StatusOr<bool> SimulateRequests(UnlearnMode mode,
                                      const ClusterPlanParams& plan,
                                      const ClusterAssignment& a,
                                      Population& pop,
                                      const TargetPolicy& policy, Rng& rng) {
  absl::StatusOr<UnlearnState> state = UnlearnState::Create(plan, a, mode);
  if (!state.ok()) return state.status();
  const int64_t tau = state->capacity();
  std::vector<bool> chosen(a.n_users(), false);
  std::vector<UserId> batch;
  for (int64_t r = 0; r < tau; ++r) {
    const UserId u = DrawTarget(a, pop, policy, chosen, rng);
    if (u < 0) {
      return MakeError(ErrorKind::kInvalidArgument,
                       "no eligible unlearning target left");
    }
    if (mode == UnlearnMode::kSequential) {
      absl::StatusOr<RetrainJob> job = state->ProcessSequential(u);
      if (IsKind(job.status(), ErrorKind::kPerClusterBudgetExceeded)) {
        return true;
      }
      if (!job.ok()) return job.status();
      pop.unlearned[u] = true;
    } else {
      batch.push_back(u);
    }
    chosen[u] = true;
  }
  if (mode == UnlearnMode::kBatch) {
    absl::StatusOr<std::vector<RetrainJob>> jobs = state->ProcessBatch(batch);
    if (IsKind(jobs.status(), ErrorKind::kPerClusterBudgetExceeded)) {
      return true;
    }
    if (!jobs.ok()) return jobs.status();
    for (UserId u : batch) pop.unlearned[u] = true;
  }
  return false;
}

std::string FormatOptional(const std::optional<int64_t>& v) {
  return v.has_value() ? absl::StrCat(*v) : "";
}

}  // namespace

std::string RequirementName(Requirement r) {
  switch (r) {
    case Requirement::kR1: return "R1";
    case Requirement::kR2: return "R2";
    case Requirement::kR3: return "R3";
    case Requirement::kR4Seq: return "R4seq";
    case Requirement::kR4Bat: return "R4bat";
    case Requirement::kJointSeq: return "R1R3R4seq";
    case Requirement::kJointBat: return "R1R3R4bat";
  }
  return "unknown";
}

Interval WilsonInterval(int64_t failures, int64_t trials) {
  if (trials <= 0) return {0, 1};
  const double n = static_cast<double>(trials);
  const double p = failures / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half =
      kZ95 * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  // Clamp so that the interval always contains the point estimate.
  return {std::min(p, std::max(0.0, center - half)),
          std::max(p, std::min(1.0, center + half))};
}

absl::StatusOr<bool> RunTrial(Requirement req, const SystemParams& p,
                              const ClusterPlanParams& plan, uint64_t seed,
                              const TargetPolicy& targets, GraphCache* cache) {
  Rng rng(seed);
  const int n = static_cast<int>(p.n_users);
  absl::StatusOr<ClusterAssignment> a =
      AssignClusters(n, static_cast<int>(plan.cluster_size),
                     static_cast<int>(plan.n_clusters), rng);
  if (!a.ok()) return a.status();
  Population pop =
      SamplePopulation(n, p.frac_adversarial, p.frac_dropout, rng);
  const int t = static_cast<int>(plan.shamir_threshold);
  const int q = static_cast<int>(plan.max_unlearn_per_cluster);

  bool failed_r4 = false;
  switch (req) {
    case Requirement::kR2:
    case Requirement::kR3:
      UnlearnWorstCase(*a, q, pop, rng);
      break;
    case Requirement::kR4Seq:
    case Requirement::kR4Bat:
    case Requirement::kJointSeq:
    case Requirement::kJointBat: {
      absl::StatusOr<bool> exceeded = SimulateRequests(
          NeedsSeq(req) ? UnlearnMode::kSequential : UnlearnMode::kBatch,
          plan, *a, pop, targets, rng);
      if (!exceeded.ok()) return exceeded.status();
      failed_r4 = *exceeded;
      break;
    }
    case Requirement::kR1:
      break;
  }
  if (req == Requirement::kR4Seq || req == Requirement::kR4Bat) {
    return failed_r4;
  }
  absl::StatusOr<RequirementStatus> status =
      CheckRequirements(*a, pop, t, q, cache);
  if (!status.ok()) return status.status();
  switch (req) {
    case Requirement::kR1: return !status->r1;
    case Requirement::kR2: return !status->r2;
    case Requirement::kR3: return !status->r3;
    default: return failed_r4 || !status->r1 || !status->r3;
  }
}

absl::StatusOr<EstimateReport> EstimateFailure(
    Requirement req, const SystemParams& p, const ClusterPlanParams& plan,
    int64_t trials, uint64_t master_seed, const EstimateOptions& options) {
  if (trials <= 0) {
    return MakeError(ErrorKind::kInvalidArgument, "trials must be positive");
  }
  if (NeedsSeq(req) && !plan.capacity_seq.has_value()) {
    return MakeError(ErrorKind::kGuardViolation,
                     "sequential capacity guard does not hold");
  }
  if (NeedsBat(req) && !plan.capacity_bat.has_value()) {
    return MakeError(ErrorKind::kGuardViolation,
                     "batch capacity guard does not hold");
  }

  const int workers =
      static_cast<int>(std::clamp<int64_t>(options.threads, 1, trials));
  std::vector<int64_t> failures(workers, 0);
  std::vector<absl::Status> errors(workers);
  auto work = [&](int w) {
    GraphCache cache;
    const int64_t begin = trials * w / workers;
    const int64_t end = trials * (w + 1) / workers;
    for (int64_t i = begin; i < end; ++i) {
      absl::StatusOr<bool> failed =
          RunTrial(req, p, plan, DeriveSeed(master_seed, {uint64_t(i)}),
                   options.targets, &cache);
      if (!failed.ok()) {
        errors[w] = failed.status();
        return;
      }
      failures[w] += *failed;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& th : pool) th.join();
  }
  for (const absl::Status& s : errors) {
    if (!s.ok()) return s;
  }

  EstimateReport r;
  r.requirement = req;
  r.params = p;
  r.plan = plan;
  if (NeedsSeq(req)) r.tau = *plan.capacity_seq;
  if (NeedsBat(req)) r.tau = *plan.capacity_bat;
  r.trials = trials;
  for (int64_t f : failures) r.failures += f;
  r.rate = static_cast<double>(r.failures) / trials;
  r.ci95 = WilsonInterval(r.failures, trials);
  r.bound = std::ldexp(1.0, req == Requirement::kR2 ? -p.correctness_bits
                                                    : -p.security_bits);
  r.pass = r.rate <= r.bound && r.ci95.low <= r.bound;
  return r;
}

std::string EstimateCsvHeader() {
  return "# cfu montecarlo csv v1\n"
         "requirement,N,gamma,delta,zeta,xi,sigma,eta,k,s,tau,trials,"
         "failures,rate,ci_low,ci_high,bound,pass\n";
}

std::string EstimateCsvRow(const EstimateReport& r) {
  const SystemParams& p = r.params;
  return absl::StrFormat(
      "%s,%d,%g,%g,%g,%g,%d,%d,%d,%d,%d,%d,%d,%.9g,%.9g,%.9g,%.9g,%s\n",
      RequirementName(r.requirement), p.n_users, p.frac_adversarial,
      p.frac_dropout, p.frac_unlearn_per_cluster, p.shamir_rate,
      p.security_bits, p.correctness_bits, r.plan.cluster_size,
      r.plan.n_clusters, r.tau, r.trials, r.failures, r.rate, r.ci95.low,
      r.ci95.high, r.bound, r.pass ? "true" : "false");
}

std::string EstimateCsv(std::span<const EstimateReport> reports) {
  std::string out = EstimateCsvHeader();
  for (const EstimateReport& r : reports) out += EstimateCsvRow(r);
  return out;
}

std::vector<SystemParams> ParameterGrid::Expand() const {
  std::vector<SystemParams> out;
  for (int64_t n : n_users)
    for (double g : gamma)
      for (double d : delta)
        for (double z : zeta)
          for (double x : xi)
            for (int s : sigma)
              for (int e : eta) out.push_back({n, g, d, z, x, s, e});
  return out;
}

SweepRow SweepPoint(const SystemParams& p) {
  SweepRow row;
  row.params = p;
  absl::StatusOr<ParGenResult> result = ParGen(p);
  if (!result.ok()) {
    row.reason = std::string(result.status().message());
    return row;
  }
  row.feasible = true;
  row.sizes = result->sizes;
  row.tau_seq = result->plan.capacity_seq;
  row.tau_bat = result->plan.capacity_bat;
  return row;
}

absl::StatusOr<std::vector<SweepRow>> Sweep(const ParameterGrid& grid) {
  std::vector<SystemParams> points = grid.Expand();
  if (points.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "empty parameter grid");
  }
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (const SystemParams& p : points) rows.push_back(SweepPoint(p));
  return rows;
}

std::string SweepCsv(std::span<const SweepRow> rows) {
  std::string out =
      "# cfu sweep csv v1\n"
      "N,gamma,delta,zeta,xi,sigma,eta,k1,k2,k3,k,s,tau_seq,tau_bat,"
      "feasible\n";
  for (const SweepRow& r : rows) {
    const SystemParams& p = r.params;
    absl::StrAppend(
        &out,
        absl::StrFormat("%d,%g,%g,%g,%g,%d,%d,%d,%d,%d,%d,%d,%s,%s,%s\n",
                        p.n_users, p.frac_adversarial, p.frac_dropout,
                        p.frac_unlearn_per_cluster, p.shamir_rate,
                        p.security_bits, p.correctness_bits, r.sizes.k1,
                        r.sizes.k2, r.sizes.k3, r.sizes.cluster_size,
                        r.sizes.n_clusters, FormatOptional(r.tau_seq),
                        FormatOptional(r.tau_bat),
                        r.feasible ? "true" : "false"));
  }
  return out;
}

}  // namespace cfu
