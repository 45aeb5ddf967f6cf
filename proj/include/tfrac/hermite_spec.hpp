#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tfrac {

// Hermite-expansion coefficients a_d..a_qmax of the Breuer-Major test
// function f = sum_q a_q H_q, with a_d != 0 and rank d >= 1.
struct HermiteSpec {
    std::vector<double> coeffs;  // coeffs[q] = a_q, q = 0..qmax; a_0 unused
    unsigned rank = 1;

    static HermiteSpec single(unsigned q, double a = 1.0) {
        if (q < 1) throw std::invalid_argument("HermiteSpec: rank must be >= 1");
        HermiteSpec s;
        s.coeffs.assign(q + 1, 0.0);
        s.coeffs[q] = a;
        s.rank = q;
        s.validate();
        return s;
    }

    unsigned qmax() const { return coeffs.empty() ? 0 : static_cast<unsigned>(coeffs.size()) - 1; }

    void validate() const {
        if (rank < 1) throw std::invalid_argument("HermiteSpec: rank must be >= 1");
        if (coeffs.size() <= rank || coeffs[rank] == 0.0)
            throw std::invalid_argument("HermiteSpec: a_d must be nonzero at the rank");
        for (unsigned q = 0; q < rank; ++q)
            if (q < coeffs.size() && coeffs[q] != 0.0)
                throw std::invalid_argument("HermiteSpec: coefficients below the rank must vanish");
        for (double a : coeffs)
            if (!std::isfinite(a)) throw std::invalid_argument("HermiteSpec: non-finite coefficient");
    }
};

}  // namespace tfrac
