#pragma once

#include <stdexcept>
#include <string>

namespace tfrac {

enum class Kind { I, II };

inline const char* to_string(Kind k) { return k == Kind::I ? "I" : "II"; }

inline Kind kind_from_string(const std::string& s) {
    if (s == "I" || s == "i") return Kind::I;
    if (s == "II" || s == "ii") return Kind::II;
    throw std::invalid_argument("kind must be I or II, got '" + s + "'");
}

// (kind, H, lambda) triple every formula is indexed by. H > 0 and lambda > 0
// always; operations with an H in (0,1) precondition check it themselves.
struct ProcessParams {
    Kind kind = Kind::I;
    double hurst = 0.5;
    double lambda = 1.0;

    ProcessParams() = default;
    ProcessParams(Kind k, double h, double lam) : kind(k), hurst(h), lambda(lam) {
        if (!(hurst > 0.0)) throw std::invalid_argument("ProcessParams: H must be > 0");
        if (!(lambda > 0.0)) throw std::invalid_argument("ProcessParams: lambda must be > 0");
    }

    double alpha() const { return hurst - 0.5; }
};

}  // namespace tfrac
