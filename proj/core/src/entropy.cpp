#include "h3geo/entropy.hpp"

#include <cmath>

#include "h3geo/errors.hpp"

namespace h3geo {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double gauss_bonnet_defect(int genus, double area) {
    if (genus < 2) throw DomainError("gauss_bonnet_defect: genus must be >= 2");
    if (area <= 0.0) throw DomainError("gauss_bonnet_defect: area must be positive");
    const double cap = 4.0 * kPi * (genus - 1);
    if (area > cap)
        throw DomainError("gauss_bonnet_defect: area exceeds 4 pi (genus - 1)");
    return 2.0 * (cap - area);
}

SurfaceRecord SurfaceRecord::from_genus_area(int genus, double area) {
    SurfaceRecord r;
    r.genus = genus;
    r.area = area;
    r.defect = gauss_bonnet_defect(genus, area);
    return r;
}

bool SurfaceRecord::consistent(double tol) const {
    return std::abs(area - (4.0 * kPi * (genus - 1) - 0.5 * defect)) <= tol;
}

long long cover_genus(long long genus, long long degree) {
    if (genus < 2) throw DomainError("cover_genus: base genus must be >= 2");
    if (degree < 1) throw DomainError("cover_genus: degree must be >= 1");
    return degree * (genus - 1) + 1;
}

double CountingFamily::log_count(double L) const {
    if (area_ratio <= 0.0) throw DomainError("CountingFamily: A must be positive");
    if (base == 0.0) return 0.0;  // the trivial family N == 1
    const double c = base > 0.0 ? base : 4.0 * kPi * area_ratio;
    const double h = (1.0 + alpha) * L / (4.0 * kPi * area_ratio) + 1.0;
    return 2.0 * h * std::log(c * h);
}

std::vector<double> entropy_limit(const CountingFamily& family,
                                  const std::vector<double>& L_grid) {
    if (L_grid.empty() || L_grid.back() < 1e6)
        throw DomainError("entropy_limit: grid must be increasing up to >= 1e6");
    std::vector<double> out;
    double prev = 0.0;
    for (std::size_t i = 0; i < L_grid.size(); ++i) {
        const double L = L_grid[i];
        if (i > 0 && L <= prev)
            throw DomainError("entropy_limit: grid must be increasing");
        prev = L;
        out.push_back(4.0 * kPi * family.log_count(L) / (L * std::log(L)));
    }
    return out;
}

double entropy_limit_extrapolated(double area_ratio,
                                  const std::vector<double>& L_grid,
                                  const std::vector<double>& alphas) {
    // Values are affine in alpha to leading order; Neville's scheme at 0.
    std::vector<double> x = alphas, y;
    for (double a : alphas) {
        CountingFamily family;
        family.area_ratio = area_ratio;
        family.alpha = a;
        family.base = -1.0;  // canonical base
        y.push_back(entropy_limit(family, L_grid).back());
    }
    const std::size_t n = y.size();
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = 0; i + level < n; ++i)
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) /
                   (x[i + level] - x[i]);
    return y[0];
}

} // namespace h3geo
