#pragma once

// Exact arithmetic for the minimal-surface-entropy bookkeeping: Gauss-Bonnet
// defect of minimal surfaces in the hyperbolic metric, covering-genus
// arithmetic, and the asymptotic counting identity on synthetic families,
// evaluated in the log domain so the counts never overflow.

#include <vector>

namespace h3geo {

struct SurfaceRecord {
    int genus = 2;        // >= 2
    double area = 0.0;    // hyperbolic area, > 0
    double defect = 0.0;  // integral of |A|^2, >= 0

    // Consistency: area = 4 pi (genus - 1) - defect / 2.
    static SurfaceRecord from_genus_area(int genus, double area);
    bool consistent(double tol = 1e-9) const;
};

// defect = 2 (4 pi (genus - 1) - area); throws DomainError when the area
// exceeds the Gauss-Bonnet bound 4 pi (genus - 1).
double gauss_bonnet_defect(int genus, double area);

// Genus of a degree-k cover of a genus-g surface: k (g - 1) + 1.
long long cover_genus(long long genus, long long degree);

// Synthetic counting family N(L) = (c h)^{2h}, h = (1 + alpha) L / (4 pi A) + 1.
// The canonical base c = 4 pi A makes ln(c h) track ln L exactly, so the
// grid values approach the limit at the 1/L rate instead of the glacial
// 1/ln L one.
struct CountingFamily {
    double area_ratio = 1.0;  // A > 0
    double alpha = 0.0;       // excess parameter, >= 0
    // c: positive for an explicit base, negative for the canonical 4 pi A,
    // zero for the trivial family N == 1.
    double base = -1.0;

    double log_count(double L) const;  // ln N(L)
};

// 4 pi ln N(L) / (L ln L) on the grid; approaches 2 (1 + alpha) / A.
std::vector<double> entropy_limit(const CountingFamily& family,
                                  const std::vector<double>& L_grid);

// Value at the largest grid point, Richardson-extrapolated over the alpha
// list (default {0.1, 0.05, 0.025}) toward alpha = 0; approaches 2 / A.
double entropy_limit_extrapolated(double area_ratio,
                                  const std::vector<double>& L_grid,
                                  const std::vector<double>& alphas = {0.1, 0.05,
                                                                       0.025});

} // namespace h3geo
