#ifndef TUBEREACH_SAFETY_HPP_
#define TUBEREACH_SAFETY_HPP_

#include "tubereach/reach.hpp"

#include <span>
#include <vector>

namespace tubereach
{

/// Unsafe region {x : a^T x >= b}.
struct Halfspace
{
    Eigen::VectorXd a;
    double b = 0.0;

    Halfspace() = default;
    Halfspace(Eigen::VectorXd normal, double offset);
};

enum class VerdictStatus
{
    Safe,
    Unknown,
};

/**
 * Safe is a proof of avoidance (up to floating-point rounding); Unknown proves
 * nothing. witness_step is the 1-based tube step that determined the margin.
 */
struct Verdict
{
    VerdictStatus status = VerdictStatus::Unknown;
    double margin = 0.0;
    int witness_step = 0;
};

const char* to_string(VerdictStatus status);

/// Streaming check of a tube against one unsafe halfspace: margin = b - max_i support(Lambda_i, a).
class HalfspaceMonitor
{
    public:
        explicit HalfspaceMonitor(Halfspace hs);

        void observe(const TubeStep& step);
        Verdict verdict() const;

    private:
        Halfspace hs_;
        double max_support_;
        int witness_ = 0;
        int count_ = 0;
};

/**
 * @brief Sufficient (incomplete) test that the tube misses the polytope
 * {x : a_j^T x <= b_j for all j}: Safe if for some facet j the whole tube lies in
 * {a_j^T x > b_j}. Never claims an intersection.
 */
class PolytopeMonitor
{
    public:
        explicit PolytopeMonitor(std::vector<Halfspace> facets);

        void observe(const TubeStep& step);
        Verdict verdict() const;

    private:
        std::vector<Halfspace> facets_;
        std::vector<double> min_value_;  // min over steps of a_j^T x
        std::vector<int> witness_;
        int count_ = 0;
};

Verdict verify_halfspace(std::span<const TubeStep> tube, const Halfspace& hs);

Verdict verify_polytope_sufficient(std::span<const TubeStep> tube, const std::vector<Halfspace>& facets);

enum class RegionMode
{
    AvoidAny,      ///< every halfspace is a separate unsafe region
    AvoidPolytope, ///< the intersection of the halfspaces {a^T x <= b} is unsafe
};

struct Region
{
    std::vector<Halfspace> halfspaces;
    RegionMode mode = RegionMode::AvoidAny;
};

/// Dispatches to HalfspaceMonitor or PolytopeMonitor by mode. For AvoidAny the
/// verdict is the one with the smallest margin.
class RegionMonitor
{
    public:
        explicit RegionMonitor(const Region& region);

        void observe(const TubeStep& step);
        Verdict verdict() const;

    private:
        RegionMode mode_;
        std::vector<HalfspaceMonitor> halfspaces_;
        std::vector<PolytopeMonitor> polytope_;
};

} // namespace tubereach

#endif
