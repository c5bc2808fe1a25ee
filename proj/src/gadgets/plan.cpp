#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "hamsim/gadgets.hpp"

namespace hamsim {

std::vector<double> GadgetPlan::schedule(double base, int count) {
  if (!(base > 1.0)) throw Error(Error::Kind::structural, "delta base must exceed 1");
  std::vector<double> d;
  for (int r = 0; r < count; ++r) {
    double e = std::log10(base) * std::pow(2.0 / 3.0, r);
    d.push_back(std::pow(10.0, std::round(e)));
  }
  return d;
}

void GadgetPlan::validate() const {
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    const auto& rd = rounds[r];
    if (!(rd.delta > 0.0)) throw Error(Error::Kind::structural, "round " + std::to_string(r) + ": delta must be positive");
    if (r > 0 && !(rd.delta < rounds[r - 1].delta))
      throw Error(Error::Kind::structural, "round deltas must strictly decrease");
    std::set<std::string> meds;
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& app : rd.apps) {
      for (const auto& m : app.mediators)
        if (!meds.insert(m).second)
          throw Error(Error::Kind::structural, "interference: mediator " + m + " used twice in round " + std::to_string(r));
      if (app.kind == GadgetKind::subdiv_pos || app.kind == GadgetKind::subdiv_neg) {
        if (app.sites.size() != 2) continue;
        auto e = std::minmax(app.sites[0], app.sites[1]);
        if (!edges.insert({e.first, e.second}).second)
          throw Error(Error::Kind::structural, "interference: edge " + e.first + "-" + e.second +
                                                   " compiled twice in round " + std::to_string(r));
      }
    }
    for (const auto& app : rd.apps)
      for (const auto& s : app.sites)
        if (meds.count(s))
          throw Error(Error::Kind::structural,
                      "interference: site " + s + " is a mediator of the same round " + std::to_string(r));
  }
}

PlanResult apply_plan(const HamiltonianExpr& H, const GadgetPlan& plan) {
  plan.validate();
  PlanResult out;
  out.H = H;
  std::vector<int> origin(H.terms.size());
  for (std::size_t i = 0; i < H.terms.size(); ++i) {
    origin[i] = static_cast<int>(i);
    out.ledger.push_back({H.terms[i].support, H.terms[i].kind, H.terms[i].coeff, {}});
  }
  for (std::size_t rr = plan.rounds.size(); rr-- > 0;) {
    const auto& rd = plan.rounds[rr];
    for (std::size_t ai = 0; ai < rd.apps.size(); ++ai) {
      GadgetResult g;
      try {
        g = apply_gadget(out.H, rd.apps[ai], rd.delta);
      } catch (const Error& e) {
        throw Error(e.kind(), "round " + std::to_string(rr) + " application " + std::to_string(ai) + ": " + e.what());
      }
      std::set<std::size_t> removed(g.removed.begin(), g.removed.end());
      int src = -1;
      std::vector<int> next;
      for (std::size_t i = 0; i < origin.size(); ++i) {
        if (removed.count(i)) {
          if (src < 0) src = origin[i];
          if (origin[i] >= 0)
            out.ledger[origin[i]].chain.push_back(
                {static_cast<int>(rr), static_cast<int>(ai), rd.apps[ai].kind, g.mediators});
        } else {
          next.push_back(origin[i]);
        }
      }
      next.resize(g.H.terms.size(), src);
      origin = std::move(next);
      out.H = std::move(g.H);
      out.mediator_pairs.push_back(g.mediators);
      auto res = rd.apps[ai];
      res.lambda = g.lambda;
      res.mediators = {g.mediators[0], g.mediators[1]};
      out.resolved.push_back(res);
    }
  }
  return out;
}

SimulationReport certify_plan(const HamiltonianExpr& target, const PlanResult& result, const GadgetPlan& plan,
                              double eta, double eps, const SolverOptions& opt) {
  if (plan.rounds.empty()) {
    return verify_simulation(result.H, target, op_norm(assemble(result.H)) + 1.0, eta, eps,
                             LocalIsometry::identity(target.system), opt);
  }
  double cut = std::numeric_limits<double>::infinity();
  for (const auto& r : plan.rounds) cut = std::min(cut, r.delta);
  return verify_simulation(result.H, target, cut / 2, eta, eps, mediator_isometry(target.system, result.mediator_pairs),
                           opt);
}

}  // namespace hamsim
