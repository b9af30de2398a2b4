#pragma once

#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "simkern/errors.hpp"
#include "simkern/ode.hpp"

namespace simkern {

// Post-irradiation cell-fate ODE system: DNA break repair, the p53/MDM2
// control circuit, apoptosis, and cell-cycle arrest. 28 entities.
//
// Each generic rate constant has its own name; Michaelis-Menten fractions
// are normalized to k*S/(Km+S) with a dedicated Km per site. The arrest
// signal is integrated as a relaxation toward its algebraic target, which
// is the logistic expression (rb_status=0) or the convex combination with
// lambda_low = 1 - ECDK2/ECDK2_max (rb_status=1).
struct RadiationParams {
    std::map<std::string, double> rates;      // all > 0
    std::map<std::string, double> mutations;  // MUT_* in [0,1]
    int rb_status = 1;                        // 0 or 1
};

inline const std::vector<std::string>& radiation_entities() {
    static const std::vector<std::string> names = {
        "oRadiation", "oBrokenEnds", "oCaps",       "oCappedEnds", "oCappedEndsReady",
        "oFixed",     "pP53Nuc",     "pMDM2Nuc",    "mMDM2Nuc",    "pP53NucPhos",
        "pWIP1Nuc",   "mWIP1Nuc",    "pATMNucPhos", "pBcl2",       "pBclXl",
        "pFasL",      "pBax",        "pApaf1",      "pCytC",       "pApoptosome",
        "oApoptosis", "pE2F",        "pARF",        "pP21cip",     "pECDK2",
        "pSiah",      "pReprimo",    "oArrestsignal"};
    return names;
}

namespace rad {

enum Entity : std::size_t {
    oRadiation = 0,
    oBrokenEnds,
    oCaps,
    oCappedEnds,
    oCappedEndsReady,
    oFixed,
    pP53Nuc,
    pMDM2Nuc,
    mMDM2Nuc,
    pP53NucPhos,
    pWIP1Nuc,
    mWIP1Nuc,
    pATMNucPhos,
    pBcl2,
    pBclXl,
    pFasL,
    pBax,
    pApaf1,
    pCytC,
    pApoptosome,
    oApoptosis,
    pE2F,
    pARF,
    pP21cip,
    pECDK2,
    pSiah,
    pReprimo,
    oArrestsignal,
    kEntityCount
};

}  // namespace rad

// Caches every named constant up front so the RHS is map-free.
class RadiationModel {
public:
    explicit RadiationModel(const RadiationParams& p) : rb_status_(p.rb_status) {
        auto rate = [&](const char* name) {
            auto it = p.rates.find(name);
            if (it == p.rates.end()) throw UnknownRate(std::string("missing rate `") + name + "`");
            return it->second;
        };
        auto mut = [&](const char* name) {
            auto it = p.mutations.find(name);
            if (it == p.mutations.end())
                throw UnknownRate(std::string("missing mutation coefficient `") + name + "`");
            return it->second;
        };

        kRadDecay = rate("kRadDecay");
        kBreak = rate("kBreak");
        kCapBind = rate("kCapBind");
        kCapProd = rate("kCapProd");
        kCapMax = rate("kCapMax");
        kCapDecay = rate("kCapDecay");
        kCappedMature = rate("kCappedMature");
        kFix = rate("kFix");
        kP53Basal = rate("kP53Basal");
        kP53Dephos = rate("kP53Dephos");
        KmDephos = rate("KmDephos");
        kP53Mdm2Deg = rate("kP53Mdm2Deg");
        KmMdm2Deg = rate("KmMdm2Deg");
        kP53Phos = rate("kP53Phos");
        KmPhos = rate("KmPhos");
        kP53Decay = rate("kP53Decay");
        kMdm2Trans = rate("kMdm2Trans");
        kMdm2Decay = rate("kMdm2Decay");
        kMdm2ArfDeg = rate("kMdm2ArfDeg");
        kMMdm2Basal = rate("kMMdm2Basal");
        kMMdm2P53 = rate("kMMdm2P53");
        KmMMdm2 = rate("KmMMdm2");
        kMMdm2Decay1 = rate("kMMdm2Decay1");
        kMMdm2Decay2 = rate("kMMdm2Decay2");
        kWip1Trans = rate("kWip1Trans");
        kWip1Decay = rate("kWip1Decay");
        kMWip1Basal = rate("kMWip1Basal");
        kMWip1P53 = rate("kMWip1P53");
        KmMWip1 = rate("KmMWip1");
        kMWip1Decay1 = rate("kMWip1Decay1");
        kMWip1Decay2 = rate("kMWip1Decay2");
        kAtmAct = rate("kAtmAct");
        kAtmTotal = rate("kAtmTotal");
        KmAtmAct = rate("KmAtmAct");
        kAtmDeact = rate("kAtmDeact");
        KmAtmDeact = rate("KmAtmDeact");
        kBcl2Prod = rate("kBcl2Prod");
        KmBcl2 = rate("KmBcl2");
        kBcl2Decay = rate("kBcl2Decay");
        kBclXlProd = rate("kBclXlProd");
        KmBclXl = rate("KmBclXl");
        kBclXlDecay = rate("kBclXlDecay");
        kFasLProd = rate("kFasLProd");
        KmFasL = rate("KmFasL");
        kFasLDecay = rate("kFasLDecay");
        kBaxProd = rate("kBaxProd");
        KmBax = rate("KmBax");
        kBaxDecay = rate("kBaxDecay");
        kApaf1Prod = rate("kApaf1Prod");
        KmApaf1 = rate("KmApaf1");
        kApaf1Decay = rate("kApaf1Decay");
        kCytCProd = rate("kCytCProd");
        kCytCBaxSens = rate("kCytCBaxSens");
        kCytCBaxOff = rate("kCytCBaxOff");
        kCytCBcl2Sens = rate("kCytCBcl2Sens");
        kCytCBcl2Off = rate("kCytCBcl2Off");
        kCytCBclXlSens = rate("kCytCBclXlSens");
        kCytCBclXlOff = rate("kCytCBclXlOff");
        kCytCDecay = rate("kCytCDecay");
        kApopForm = rate("kApopForm");
        kApopDecay = rate("kApopDecay");
        kApoFasL = rate("kApoFasL");
        kApoSom = rate("kApoSom");
        kApoDecay = rate("kApoDecay");
        kE2fProd = rate("kE2fProd");
        kE2fDecay = rate("kE2fDecay");
        kArfProd = rate("kArfProd");
        KmArf = rate("KmArf");
        kArfDecay = rate("kArfDecay");
        kArfMdm2 = rate("kArfMdm2");
        kP21Prod = rate("kP21Prod");
        KmP21 = rate("KmP21");
        kP21Decay = rate("kP21Decay");
        kEcdk2Prod = rate("kEcdk2Prod");
        kEcdk2P21 = rate("kEcdk2P21");
        KmEcdk2 = rate("KmEcdk2");
        kEcdk2Decay = rate("kEcdk2Decay");
        kSiahProd = rate("kSiahProd");
        KmSiah = rate("KmSiah");
        kSiahDecay = rate("kSiahDecay");
        kRepProd = rate("kRepProd");
        KmRep = rate("KmRep");
        kRepDecay = rate("kRepDecay");
        ka1 = rate("ka1");
        ka2 = rate("ka2");
        kArrestRelax = rate("kArrestRelax");
        ecdk2_max = rate("ECDK2_max");

        mut_p53 = mut("MUT_p53");
        mut_arf = mut("MUT_arf");
        mut_bax = mut("MUT_Bax");
        mut_apaf1 = mut("MUT_Apaf1");
        mut_rb = mut("MUT_Rb");
        mut_myc = mut("MUT_myc");
        mut_siah = mut("MUT_Siah");
        mut_reprimo = mut("MUT_Reprimo");
    }

    // oRadiation(0)=1, pECDK2(0)=ECDK2_max (no brakes on the cycle at t=0),
    // everything else 0.
    std::vector<double> initial_state() const {
        std::vector<double> y(rad::kEntityCount, 0.0);
        y[rad::oRadiation] = 1.0;
        y[rad::pECDK2] = ecdk2_max;
        return y;
    }

    double p53tt(const std::vector<double>& y) const {
        double v = y[rad::pP53NucPhos];
        return mut_p53 * v * v * v * v;
    }

    double arrest_target(const std::vector<double>& y) const {
        double sig = 1.0 / (1.0 + std::exp(ka1 * (y[rad::pSiah] + y[rad::pReprimo] - ka2)));
        if (rb_status_ == 0) return sig;
        double lambda_low = 1.0 - y[rad::pECDK2] / ecdk2_max;
        if (lambda_low < 0.0) lambda_low = 0.0;
        if (lambda_low > 1.0) lambda_low = 1.0;
        return lambda_low + (1.0 - lambda_low) * sig;
    }

    void rhs(const std::vector<double>& y, double /*t*/, std::vector<double>& dy) const {
        using namespace rad;
        auto mm = [](double s, double km) { return s / (km + s); };
        // switch-like response: ~0 below the offset, ~1 above it
        auto sig = [](double a, double off, double x) {
            return 1.0 / (1.0 + std::exp(-a * (x - off)));
        };

        const double tt = p53tt(y);

        dy[oRadiation] = -kRadDecay * y[oRadiation];
        dy[oBrokenEnds] = kBreak * y[oRadiation] - kCapBind * y[oBrokenEnds] * y[oCaps];
        dy[oCaps] = std::min(kCapProd * y[oBrokenEnds], kCapMax) -
                    kCapBind * y[oBrokenEnds] * y[oCaps] - kCapDecay * y[oCaps];
        dy[oCappedEnds] = kCapBind * y[oBrokenEnds] * y[oCaps] - kCappedMature * y[oCappedEnds];
        dy[oCappedEndsReady] = kCappedMature * y[oCappedEnds] - kFix * y[oCappedEndsReady];
        dy[oFixed] = kFix * y[oCappedEndsReady];

        const double dephos = kP53Dephos * y[pWIP1Nuc] * mm(y[pP53NucPhos], KmDephos);
        const double phos = kP53Phos * y[pATMNucPhos] * mm(y[pP53Nuc], KmPhos);
        dy[pP53Nuc] = kP53Basal + dephos - kP53Mdm2Deg * y[pMDM2Nuc] * mm(y[pP53Nuc], KmMdm2Deg) -
                      phos - kP53Decay * y[pP53Nuc];
        dy[pMDM2Nuc] = kMdm2Trans * y[mMDM2Nuc] - kMdm2Decay * y[pMDM2Nuc] -
                       mut_arf * kMdm2ArfDeg * y[pARF] * y[pMDM2Nuc];
        dy[mMDM2Nuc] = kMMdm2Basal + kMMdm2P53 * tt / (std::pow(KmMMdm2, 4) + tt) -
                       kMMdm2Decay1 * y[mMDM2Nuc] - kMMdm2Decay2 * y[mMDM2Nuc];
        dy[pP53NucPhos] = phos - dephos;
        dy[pWIP1Nuc] = kWip1Trans * y[mWIP1Nuc] - kWip1Decay * y[pWIP1Nuc];
        dy[mWIP1Nuc] = kMWip1Basal + kMWip1P53 * tt / (std::pow(KmMWip1, 4) + tt) -
                       kMWip1Decay1 * y[mWIP1Nuc] - kMWip1Decay2 * y[mWIP1Nuc];
        const double atm_free = (kAtmTotal - y[pATMNucPhos]) / 2.0;
        dy[pATMNucPhos] =
            2.0 * kAtmAct * y[oBrokenEnds] * (atm_free > 0.0 ? mm(atm_free, KmAtmAct) : 0.0) -
            2.0 * kAtmDeact * y[pWIP1Nuc] * y[pATMNucPhos] * y[pATMNucPhos] /
                (KmAtmDeact + y[pATMNucPhos] * y[pATMNucPhos]);

        dy[pBcl2] = kBcl2Prod * tt / (KmBcl2 + tt) - kBcl2Decay * y[pBcl2];
        dy[pBclXl] = kBclXlProd * tt / (KmBclXl + tt) - kBclXlDecay * y[pBclXl];
        dy[pFasL] = kFasLProd * tt / (KmFasL + tt) - kFasLDecay * y[pFasL];
        dy[pBax] = mut_bax * (kBaxProd * tt / (KmBax + tt) - kBaxDecay * y[pBax]);
        dy[pApaf1] = mut_apaf1 * (kApaf1Prod * tt / (KmApaf1 + tt) - kApaf1Decay * y[pApaf1]);

        const double cyt7 = std::pow(y[pCytC], 7);
        dy[pCytC] = kCytCProd * sig(kCytCBaxSens, kCytCBaxOff, y[pBax]) *
                        (1.0 - sig(kCytCBcl2Sens, kCytCBcl2Off, y[pBcl2])) *
                        (1.0 - sig(kCytCBclXlSens, kCytCBclXlOff, y[pBclXl])) -
                    kCytCDecay * y[pCytC] - kApopForm * y[pApaf1] * cyt7;
        dy[pApoptosome] = kApopForm * y[pApaf1] * cyt7 - kApopDecay * y[pApoptosome];
        dy[oApoptosis] =
            kApoFasL * y[pFasL] + kApoSom * y[pApoptosome] - kApoDecay * y[oApoptosis];

        dy[pE2F] = mut_rb * mut_myc * kE2fProd - kE2fDecay * y[pE2F];
        dy[pARF] = mut_arf * (kArfProd * mm(y[pE2F], KmArf) - kArfDecay * y[pARF] -
                              kArfMdm2 * y[pARF] * y[pMDM2Nuc]);
        dy[pP21cip] = kP21Prod * tt / (KmP21 + tt) - kP21Decay * y[pP21cip];
        dy[pECDK2] =
            kEcdk2Prod - kEcdk2P21 * y[pP21cip] / (KmEcdk2 + y[pP21cip]) - kEcdk2Decay * y[pECDK2];
        dy[pSiah] = mut_siah * (kSiahProd * tt / (KmSiah + tt) - kSiahDecay * y[pSiah]);
        dy[pReprimo] = mut_reprimo * (kRepProd * tt / (KmRep + tt) - kRepDecay * y[pReprimo]);
        dy[oArrestsignal] = kArrestRelax * (arrest_target(y) - y[oArrestsignal]);
    }

    Trajectory simulate(const std::vector<double>& grid, double step) const {
        return integrate_ode([this](const std::vector<double>& y, double t,
                                    std::vector<double>& dy) { rhs(y, t, dy); },
                             initial_state(), grid, step, radiation_entities());
    }

    double ecdk2_max = 1.0;

private:
    int rb_status_;
    double kRadDecay, kBreak, kCapBind, kCapProd, kCapMax, kCapDecay, kCappedMature, kFix;
    double kP53Basal, kP53Dephos, KmDephos, kP53Mdm2Deg, KmMdm2Deg, kP53Phos, KmPhos, kP53Decay;
    double kMdm2Trans, kMdm2Decay, kMdm2ArfDeg;
    double kMMdm2Basal, kMMdm2P53, KmMMdm2, kMMdm2Decay1, kMMdm2Decay2;
    double kWip1Trans, kWip1Decay, kMWip1Basal, kMWip1P53, KmMWip1, kMWip1Decay1, kMWip1Decay2;
    double kAtmAct, kAtmTotal, KmAtmAct, kAtmDeact, KmAtmDeact;
    double kBcl2Prod, KmBcl2, kBcl2Decay, kBclXlProd, KmBclXl, kBclXlDecay;
    double kFasLProd, KmFasL, kFasLDecay, kBaxProd, KmBax, kBaxDecay;
    double kApaf1Prod, KmApaf1, kApaf1Decay;
    double kCytCProd, kCytCBaxSens, kCytCBaxOff, kCytCBcl2Sens, kCytCBcl2Off, kCytCBclXlSens,
        kCytCBclXlOff, kCytCDecay, kApopForm, kApopDecay;
    double kApoFasL, kApoSom, kApoDecay;
    double kE2fProd, kE2fDecay, kArfProd, KmArf, kArfDecay, kArfMdm2;
    double kP21Prod, KmP21, kP21Decay, kEcdk2Prod, kEcdk2P21, KmEcdk2, kEcdk2Decay;
    double kSiahProd, KmSiah, kSiahDecay, kRepProd, KmRep, kRepDecay;
    double ka1, ka2, kArrestRelax;
    double mut_p53, mut_arf, mut_bax, mut_apaf1, mut_rb, mut_myc, mut_siah, mut_reprimo;
};

// Final-level classification: 1 apoptosis, 2 repaired and cycling,
// 3 mitotic catastrophe, 4 quiescence.
inline int classify_radiation(const std::map<std::string, double>& final_levels) {
    auto get = [&](const char* name) {
        auto it = final_levels.find(name);
        if (it == final_levels.end())
            throw MissingEntity(std::string("missing entity `") + name + "`");
        return it->second;
    };
    double apoptosis = get("oApoptosis");
    double fixed = get("oFixed");
    double arrest = get("oArrestsignal");
    if (apoptosis >= 0.8) return 1;
    if (fixed > 0.9 && arrest < 0.5) return 2;
    if (fixed <= 0.9 && arrest < 0.5) return 3;
    return 4;
}

inline int classify_radiation(const Trajectory& traj) {
    std::map<std::string, double> final_levels;
    std::size_t last = traj.time_count() - 1;
    for (std::size_t e = 0; e < traj.entity_count(); ++e)
        final_levels[traj.entity_names[e]] = traj.level(e, last);
    return classify_radiation(final_levels);
}

// Flat `name = value` parameter file. Mutation coefficients are the MUT_*
// keys, rbStatus selects the arrest-signal case, everything else is a rate.
inline RadiationParams parse_radiation_params(const std::string& text) {
    RadiationParams p;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected `name = value` in line `" + line + "`");
        std::string name = line.substr(a, eq - a);
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
            name.pop_back();
        double value = std::stod(line.substr(eq + 1));
        if (name == "rbStatus")
            p.rb_status = static_cast<int>(value);
        else if (name.rfind("MUT_", 0) == 0)
            p.mutations[name] = value;
        else
            p.rates[name] = value;
    }
    return p;
}

}  // namespace simkern
