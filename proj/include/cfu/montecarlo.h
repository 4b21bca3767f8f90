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

#ifndef CFU_MONTECARLO_H_
#define CFU_MONTECARLO_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "cfu/bounds.h"
#include "cfu/cohort.h"

namespace cfu {

enum class Requirement {
  kR1,
  kR2,
  kR3,
  kR4Seq,
  kR4Bat,
  // R1 and R3 and R4 together, R4 under sequential requests.
  kJointSeq,
  kJointBat,
};

std::string RequirementName(Requirement r);

struct Interval {
  double low = 0;
  double high = 0;
};

// Wilson score interval at 95%.
Interval WilsonInterval(int64_t failures, int64_t trials);

struct EstimateReport {
  Requirement requirement = Requirement::kR1;
  SystemParams params;
  ClusterPlanParams plan;
  int64_t tau = 0;  // requests per trial; 0 when none are simulated
  int64_t trials = 0;
  int64_t failures = 0;
  double rate = 0;
  Interval ci95;
  double bound = 0;  // 2^-sigma, or 2^-eta for R2
  bool pass = false;
};

struct EstimateOptions {
  TargetPolicy targets;
  int threads = 1;
};

// Each trial t draws a clustering and population from
// DeriveSeed(master_seed, {t}) and evaluates one requirement.
//  R1: fewer than t adversaries in every cluster.
//  R2, R3: evaluated after q honest alive users per cluster are unlearned,
//    the worst case admitted by R4.
//  R4seq: tau_seq requests through the sequential state machine; fails when
//    any request is rejected for exceeding q.
//  R4bat: one batch of tau_bat distinct targets.
// GuardViolation when the requirement needs a capacity the plan lacks.
absl::StatusOr<EstimateReport> EstimateFailure(
    Requirement req, const SystemParams& p, const ClusterPlanParams& plan,
    int64_t trials, uint64_t master_seed, const EstimateOptions& options = {});

// Outcome of a single trial (true = requirement violated).
absl::StatusOr<bool> RunTrial(Requirement req, const SystemParams& p,
                              const ClusterPlanParams& plan, uint64_t seed,
                              const TargetPolicy& targets,
                              GraphCache* cache = nullptr);

std::string EstimateCsvHeader();
std::string EstimateCsvRow(const EstimateReport& r);
std::string EstimateCsv(std::span<const EstimateReport> reports);

struct ParameterGrid {
  std::vector<int64_t> n_users;
  std::vector<double> gamma;
  std::vector<double> delta;
  std::vector<double> zeta;
  std::vector<double> xi;
  std::vector<int> sigma;
  std::vector<int> eta;

  // Cartesian product in field order, last field varying fastest.
  std::vector<SystemParams> Expand() const;
};

struct SweepRow {
  SystemParams params;
  bool feasible = false;
  ClusterSizes sizes;  // zero when infeasible
  std::optional<int64_t> tau_seq;
  std::optional<int64_t> tau_bat;
  std::string reason;  // failure message when infeasible
};

SweepRow SweepPoint(const SystemParams& p);
// InvalidArgument for an empty grid.
absl::StatusOr<std::vector<SweepRow>> Sweep(const ParameterGrid& grid);
std::string SweepCsv(std::span<const SweepRow> rows);

}  // namespace cfu

#endif  // CFU_MONTECARLO_H_
