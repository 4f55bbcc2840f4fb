// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_COST_HPP
#define DBP_COST_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dbp/uplink.hpp"

namespace dbp {

enum class Link { Uplink, Downlink };
enum class Preference { Ber, Bandwidth };

std::string_view to_string(Link l);
std::string_view to_string(Preference p);
Link parse_link(std::string_view s);
Preference parse_preference(std::string_view s);

// Real values crossing the fusion boundary per symbol (per subcarrier).
// InvalidParameter unless C, U, N_coh >= 1 and arch is PD or FD.
double transfer_cost(Link link, Architecture arch, double clusters, double users,
                     double coherence);

// Real multiplications per symbol for PD-MMSE with explicit inversion or
// implicit Cholesky solving; parallel per-cluster work counted once.
double timing_cost(Inversion method, double cluster_size, double users, double coherence);

enum class Pipeline {
  SeparateExplicit,
  MmseWfReuseGram,
  ZfZfReuseInverse,
  ZfZfImplicitReuseL,
};

std::string_view to_string(Pipeline p);
// UnknownPipeline for anything else.
Pipeline parse_pipeline(std::string_view name);
const std::vector<Pipeline>& all_pipelines();

// Additive cost terms of an integrated uplink-detection + downlink-precoding
// pipeline, in evaluation order.
struct PipelineCost {
  std::vector<std::pair<std::string, double>> terms;
  double total() const;
  // 0 when the term is absent.
  double term(std::string_view name) const;
};

PipelineCost pipeline_breakdown(Pipeline p, double cluster_size, double users, double coherence);
double pipeline_cost(Pipeline p, double cluster_size, double users, double coherence);
double pipeline_cost(std::string_view name, double cluster_size, double users, double coherence);

struct CostReport {
  double coherence = 1;
  double m_pd_ul = 0, m_fd_ul = 0, m_pd_dl = 0, m_fd_dl = 0;
  double n_ex = 0, n_im = 0;
  std::vector<std::pair<std::string, double>> pipeline_costs;
};

CostReport cost_report(double clusters, double cluster_size, double users, double coherence);

struct DesignChoice {
  Architecture architecture = Architecture::PD;
  std::string rationale;
  Link link = Link::Uplink;
  double coherence = 1;
  double users = 1;
  Preference preference = Preference::Ber;
};

DesignChoice select_architecture(Link link, double coherence, double users, Preference preference);

}  // namespace dbp

#endif  // DBP_COST_HPP
