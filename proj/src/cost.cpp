// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/cost.hpp"

#include <cmath>

#include "dbp/error.hpp"

namespace dbp {

namespace {

void require_counts(std::initializer_list<double> values) {
  for (double v : values)
    if (!(v >= 1.0) || !std::isfinite(v))
      fail(ErrorCode::InvalidParameter, "cost model parameters must be finite and >= 1");
}

// Per-symbol cost of the building blocks used by every pipeline.
double gram_term(double bc, double u, double n) { return 2.0 * bc * u * u / n; }
double explicit_inverse_term(double u, double n) {
  return (10.0 / 3.0 * u * u * u - 4.0 / 3.0 * u) / n;
}
double cholesky_term(double u, double n) { return (2.0 / 3.0 * u * u * u - 2.0 / 3.0 * u) / n; }
double matched_filter_term(double bc, double u) { return 4.0 * bc * u; }
double matvec_term(double u) { return 4.0 * u * u; }
double substitution_term(double u) { return 4.0 * u * u; }
// ||x||^2 over the local entries plus the 1/beta scaling.
double normalization_term(double bc) { return 4.0 * bc; }

}  // namespace

std::string_view to_string(Link l) { return l == Link::Uplink ? "uplink" : "downlink"; }
std::string_view to_string(Preference p) { return p == Preference::Ber ? "ber" : "bandwidth"; }

Link parse_link(std::string_view s) {
  if (s == "uplink" || s == "ul") return Link::Uplink;
  if (s == "downlink" || s == "dl") return Link::Downlink;
  fail(ErrorCode::InvalidParameter, "unknown link '" + std::string(s) + "'");
}

Preference parse_preference(std::string_view s) {
  if (s == "ber") return Preference::Ber;
  if (s == "bandwidth") return Preference::Bandwidth;
  fail(ErrorCode::InvalidParameter, "unknown preference '" + std::string(s) + "'");
}

double transfer_cost(Link link, Architecture arch, double clusters, double users,
                     double coherence) {
  require_counts({clusters, users, coherence});
  const double c = clusters, u = users, n = coherence;
  if (arch == Architecture::PD) return c * (u * u + 2.0 * n * u) / n;
  if (arch == Architecture::FD)
    return link == Link::Uplink ? 3.0 * c * u : c * (1.0 + 2.0 * n * u) / n;
  fail(ErrorCode::InvalidParameter, "transfer cost is defined for PD and FD only");
}

double timing_cost(Inversion method, double cluster_size, double users, double coherence) {
  require_counts({cluster_size, users, coherence});
  const double bc = cluster_size, u = users, n = coherence;
  const double channel_only =
      gram_term(bc, u, n) +
      (method == Inversion::Explicit ? explicit_inverse_term(u, n) : cholesky_term(u, n));
  const double per_symbol = matched_filter_term(bc, u) +
                            (method == Inversion::Explicit ? matvec_term(u) : substitution_term(u));
  return channel_only + per_symbol;
}

std::string_view to_string(Pipeline p) {
  switch (p) {
    case Pipeline::SeparateExplicit: return "separate_explicit";
    case Pipeline::MmseWfReuseGram: return "mmse_wf_reuse_gram";
    case Pipeline::ZfZfReuseInverse: return "zf_zf_reuse_inverse";
    case Pipeline::ZfZfImplicitReuseL: return "zf_zf_implicit_reuse_L";
  }
  return "";
}

Pipeline parse_pipeline(std::string_view name) {
  for (Pipeline p : all_pipelines())
    if (to_string(p) == name) return p;
  fail(ErrorCode::UnknownPipeline, "unknown pipeline '" + std::string(name) + "'");
}

const std::vector<Pipeline>& all_pipelines() {
  static const std::vector<Pipeline> all{Pipeline::SeparateExplicit, Pipeline::MmseWfReuseGram,
                                         Pipeline::ZfZfReuseInverse, Pipeline::ZfZfImplicitReuseL};
  return all;
}

double PipelineCost::total() const {
  double s = 0.0;
  for (const auto& [name, v] : terms) s += v;
  return s;
}

double PipelineCost::term(std::string_view name) const {
  for (const auto& [n, v] : terms)
    if (n == name) return v;
  return 0.0;
}

PipelineCost pipeline_breakdown(Pipeline p, double cluster_size, double users, double coherence) {
  require_counts({cluster_size, users, coherence});
  const double bc = cluster_size, u = users, n = coherence;
  PipelineCost cost;
  auto add = [&](std::string name, double v) { cost.terms.emplace_back(std::move(name), v); };

  // Uplink detection.
  add("ul_gram", gram_term(bc, u, n));
  add("ul_matched_filter", matched_filter_term(bc, u));
  if (p == Pipeline::ZfZfImplicitReuseL) {
    add("ul_cholesky", cholesky_term(u, n));
    add("ul_substitution", substitution_term(u));
  } else {
    add("ul_inverse", explicit_inverse_term(u, n));
    add("ul_matvec", matvec_term(u));
  }

  // Downlink precoding.
  switch (p) {
    case Pipeline::SeparateExplicit:
      add("dl_gram", gram_term(bc, u, n));
      add("dl_inverse", explicit_inverse_term(u, n));
      add("dl_matvec", matvec_term(u));
      break;
    case Pipeline::MmseWfReuseGram:
      add("dl_inverse", explicit_inverse_term(u, n));
      add("dl_matvec", matvec_term(u));
      break;
    case Pipeline::ZfZfReuseInverse:
      add("dl_matvec", matvec_term(u));
      break;
    case Pipeline::ZfZfImplicitReuseL:
      add("dl_substitution", substitution_term(u));
      break;
  }
  add("dl_beamform", matched_filter_term(bc, u));
  add("dl_normalize", normalization_term(bc));
  return cost;
}

double pipeline_cost(Pipeline p, double cluster_size, double users, double coherence) {
  return pipeline_breakdown(p, cluster_size, users, coherence).total();
}

double pipeline_cost(std::string_view name, double cluster_size, double users, double coherence) {
  return pipeline_cost(parse_pipeline(name), cluster_size, users, coherence);
}

CostReport cost_report(double clusters, double cluster_size, double users, double coherence) {
  CostReport r;
  r.coherence = coherence;
  r.m_pd_ul = transfer_cost(Link::Uplink, Architecture::PD, clusters, users, coherence);
  r.m_fd_ul = transfer_cost(Link::Uplink, Architecture::FD, clusters, users, coherence);
  r.m_pd_dl = transfer_cost(Link::Downlink, Architecture::PD, clusters, users, coherence);
  r.m_fd_dl = transfer_cost(Link::Downlink, Architecture::FD, clusters, users, coherence);
  r.n_ex = timing_cost(Inversion::Explicit, cluster_size, users, coherence);
  r.n_im = timing_cost(Inversion::Implicit, cluster_size, users, coherence);
  for (Pipeline p : all_pipelines())
    r.pipeline_costs.emplace_back(std::string(to_string(p)),
                                  pipeline_cost(p, cluster_size, users, coherence));
  return r;
}

DesignChoice select_architecture(Link link, double coherence, double users, Preference preference) {
  DesignChoice d;
  d.link = link;
  d.coherence = coherence;
  d.users = users;
  d.preference = preference;
  if (link == Link::Uplink) {
    if (coherence > users) {
      d.architecture = Architecture::PD;
      d.rationale =
          "N_coh > U: PD transfers less data than FD and matches centralized BER, "
          "so it wins on both axes";
    } else if (preference == Preference::Bandwidth) {
      d.architecture = Architecture::FD;
      d.rationale =
          "N_coh <= U: FD transfers no more data than PD; fusion bandwidth is the "
          "priority, accepting a BER loss";
    } else {
      d.architecture = Architecture::PD;
      d.rationale =
          "N_coh <= U: PD transfers more data than FD but keeps centralized BER, "
          "which is the priority";
    }
  } else if (preference == Preference::Ber) {
    d.architecture = Architecture::PD;
    d.rationale = "downlink: PD-WF BER is never worse than FD-WF";
  } else {
    d.architecture = Architecture::FD;
    d.rationale = "downlink: FD only broadcasts s and one power scalar, the smaller transfer";
  }
  return d;
}

}  // namespace dbp
