#include "tubereach/safety.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tubereach
{

Halfspace::Halfspace(Eigen::VectorXd normal, double offset) : a(std::move(normal)), b(offset)
{
    if (!a.allFinite() || !std::isfinite(b))
        throw std::invalid_argument("halfspace must be finite");
    if (a.size() == 0 || a.isZero(0.0))
        throw std::invalid_argument("halfspace normal must be nonzero");
}

const char* to_string(VerdictStatus status)
{
    return status == VerdictStatus::Safe ? "safe" : "unknown";
}

HalfspaceMonitor::HalfspaceMonitor(Halfspace hs)
    : hs_(std::move(hs)), max_support_(-std::numeric_limits<double>::infinity())
{
}

void HalfspaceMonitor::observe(const TubeStep& step)
{
    if (step.lambda.dim() != hs_.a.size())
        throw std::invalid_argument("verify_halfspace: dimension mismatch");
    const double s = support(step.lambda, hs_.a);
    if (count_ == 0 || s > max_support_)
    {
        max_support_ = s;
        witness_ = step.index;
    }
    ++count_;
}

Verdict HalfspaceMonitor::verdict() const
{
    if (count_ == 0)
        throw std::invalid_argument("verify_halfspace: empty tube");
    Verdict v;
    v.margin = hs_.b - max_support_;
    v.status = v.margin > 0.0 ? VerdictStatus::Safe : VerdictStatus::Unknown;
    v.witness_step = witness_;
    return v;
}

PolytopeMonitor::PolytopeMonitor(std::vector<Halfspace> facets)
    : facets_(std::move(facets)),
      min_value_(facets_.size(), std::numeric_limits<double>::infinity()),
      witness_(facets_.size(), 0)
{
    if (facets_.empty())
        throw std::invalid_argument("verify_polytope_sufficient: at least one facet required");
}

void PolytopeMonitor::observe(const TubeStep& step)
{
    for (std::size_t j = 0; j < facets_.size(); ++j)
    {
        if (step.lambda.dim() != facets_[j].a.size())
            throw std::invalid_argument("verify_polytope_sufficient: dimension mismatch");
        const double lowest = -support(step.lambda, -facets_[j].a);
        if (count_ == 0 || lowest < min_value_[j])
        {
            min_value_[j] = lowest;
            witness_[j] = step.index;
        }
    }
    ++count_;
}

Verdict PolytopeMonitor::verdict() const
{
    if (count_ == 0)
        throw std::invalid_argument("verify_polytope_sufficient: empty tube");

    Verdict best;
    best.margin = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < facets_.size(); ++j)
    {
        const double margin = min_value_[j] - facets_[j].b;
        if (margin > best.margin)
        {
            best.margin = margin;
            best.witness_step = witness_[j];
        }
    }
    best.status = best.margin > 0.0 ? VerdictStatus::Safe : VerdictStatus::Unknown;
    return best;
}

Verdict verify_halfspace(std::span<const TubeStep> tube, const Halfspace& hs)
{
    HalfspaceMonitor monitor(hs);
    for (const auto& step : tube)
        monitor.observe(step);
    return monitor.verdict();
}

Verdict verify_polytope_sufficient(std::span<const TubeStep> tube, const std::vector<Halfspace>& facets)
{
    PolytopeMonitor monitor(facets);
    for (const auto& step : tube)
        monitor.observe(step);
    return monitor.verdict();
}

RegionMonitor::RegionMonitor(const Region& region) : mode_(region.mode)
{
    if (region.halfspaces.empty())
        throw std::invalid_argument("region has no halfspaces");
    if (mode_ == RegionMode::AvoidAny)
    {
        for (const auto& hs : region.halfspaces)
            halfspaces_.emplace_back(hs);
    }
    else
    {
        polytope_.emplace_back(region.halfspaces);
    }
}

void RegionMonitor::observe(const TubeStep& step)
{
    for (auto& m : halfspaces_)
        m.observe(step);
    for (auto& m : polytope_)
        m.observe(step);
}

Verdict RegionMonitor::verdict() const
{
    if (mode_ == RegionMode::AvoidPolytope)
        return polytope_.front().verdict();

    Verdict worst = halfspaces_.front().verdict();
    for (std::size_t k = 1; k < halfspaces_.size(); ++k)
    {
        const Verdict v = halfspaces_[k].verdict();
        if (v.margin < worst.margin)
            worst = v;
    }
    return worst;
}

} // namespace tubereach
