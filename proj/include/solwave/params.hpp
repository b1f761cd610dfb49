#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace solwave {

// Coefficients of the full PDE
//   i u_t - u_xx - b|u|^2 u + i a|u|^2 u_x + i B u^2 conj(u)_x
//     + g u d/dx H(|u|^2) = 0
// together with the traveling-wave frequency and speed.
struct PhysicalParams {
    double b = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double omega = 0.0;
    double c = 0.0;
};

// Coefficients of the reduced profile equation
//   -psi'' - nu psi + A|psi|^2 psi + B|psi|^4 psi + gamma psi (H(|psi|^2))' = 0
struct ReducedParams {
    double A = 0.0;
    double B = 0.0;
    double G = 0.0;  // coefficient of the Im(psi' conj(psi)) term; vanishes on solutions
    double nu = 0.0; // omega + c^2/4
    double gamma = 0.0;
};

inline ReducedParams reduce(const PhysicalParams& p) {
    ReducedParams r;
    r.A = -p.b + p.c * (p.alpha - p.beta) / 2.0;
    r.B = (p.alpha + p.beta) * (-3.0 * p.alpha + 5.0 * p.beta) / 16.0;
    r.G = p.beta - p.alpha;
    r.nu = p.omega + p.c * p.c / 4.0;
    r.gamma = p.gamma;
    return r;
}

enum class RegimeTag {
    SubcriticalNehari,
    CriticalNehari,
    FixedMeanFlow,
    FixedQuartic,
    Nonexistence1,
    Nonexistence2,
    Unclassified,
};

inline const char* regime_name(RegimeTag t) {
    switch (t) {
        case RegimeTag::SubcriticalNehari: return "SubcriticalNehari";
        case RegimeTag::CriticalNehari: return "CriticalNehari";
        case RegimeTag::FixedMeanFlow: return "FixedMeanFlow";
        case RegimeTag::FixedQuartic: return "FixedQuartic";
        case RegimeTag::Nonexistence1: return "Nonexistence1";
        case RegimeTag::Nonexistence2: return "Nonexistence2";
        case RegimeTag::Unclassified: return "Unclassified";
    }
    return "?";
}

struct Regime {
    RegimeTag tag = RegimeTag::Unclassified;
    std::string reason;
};

inline constexpr double kNuZeroTol = 1e-12;  // band for the nu = 0 distinction

// All matching regimes, nonexistence tags first. Returns a single
// Unclassified entry when nothing matches.
inline std::vector<Regime> classify(const ReducedParams& r) {
    const bool nu_zero = std::abs(r.nu) <= kNuZeroTol;
    const bool nu_neg = r.nu < -kNuZeroTol;
    const bool nu_nonneg = !nu_neg;

    std::vector<Regime> out;
    if (r.B >= 0.0 && r.A >= 0.0 && r.gamma > 0.0)
        out.push_back({RegimeTag::Nonexistence1, "B >= 0, A >= 0, gamma > 0"});
    if (r.B <= 0.0 && r.A <= 0.0 && nu_nonneg)
        out.push_back({RegimeTag::Nonexistence2, "B <= 0, A <= 0, nu >= 0"});
    if (nu_neg && r.B <= 0.0 && r.gamma >= 0.0)
        out.push_back({RegimeTag::SubcriticalNehari, "nu < 0, B <= 0, gamma >= 0"});
    if (nu_zero && r.A > 0.0 && r.B < 0.0 && r.gamma >= 0.0)
        out.push_back({RegimeTag::CriticalNehari, "nu = 0, A > 0, B < 0, gamma >= 0"});
    if (nu_neg)
        out.push_back({RegimeTag::FixedMeanFlow,
                       "nu < 0 (A and gamma produced by the multiplier)"});
    if (nu_zero && r.B < 0.0 && r.gamma >= 0.0)
        out.push_back({RegimeTag::FixedQuartic, "nu = 0, B < 0, gamma >= 0"});
    if (out.empty()) out.push_back({RegimeTag::Unclassified, "no sign pattern matched"});
    return out;
}

// --- flat key=value config files (keys: b, alpha, beta, gamma, omega, c) ---

inline std::map<std::string, double> parse_kv_config(std::istream& is) {
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const char* ws = " \t\r\n";
            s.erase(0, s.find_first_not_of(ws));
            auto last = s.find_last_not_of(ws);
            s.erase(last == std::string::npos ? 0 : last + 1);
            return s;
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        try {
            kv[key] = std::stod(val);
        } catch (const std::exception&) {
            throw std::runtime_error("config: bad value for key '" + key + "': " + val);
        }
    }
    return kv;
}

inline PhysicalParams params_from_config(std::istream& is) {
    auto kv = parse_kv_config(is);
    PhysicalParams p;
    auto get = [&](const char* k, double& slot) {
        auto it = kv.find(k);
        if (it != kv.end()) slot = it->second;
    };
    get("b", p.b);
    get("alpha", p.alpha);
    get("beta", p.beta);
    get("gamma", p.gamma);
    get("omega", p.omega);
    get("c", p.c);
    return p;
}

inline PhysicalParams params_from_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config " + path);
    return params_from_config(is);
}

}  // namespace solwave
