#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "simkern/boolnet.hpp"
#include "simkern/errors.hpp"
#include "simkern/learners.hpp"
#include "simkern/netflow.hpp"
#include "simkern/ode.hpp"
#include "simkern/radiation.hpp"
#include "simkern/randspec.hpp"
#include "simkern/rng.hpp"
#include "simkern/similarity.hpp"

namespace simkern {

// A built-in simulation model. The ground-truth stage draws one genome
// (parameter assignment) per sample from the randomization template and
// simulates it once; the kernel stage re-simulates every sample under
// trial-level perturbations shared across samples.
class Model {
public:
    virtual ~Model() = default;

    virtual std::string name() const = 0;
    virtual Task task() const = 0;
    virtual std::vector<double> subsample_schedule() const = 0;
    virtual const RandSpec& genome_spec() const = 0;
    virtual SimilarityConfig similarity_config() const = 0;

    // ground-truth outcome of one genome (class label or real value)
    virtual double outcome(const ParamAssignment& genome) const = 0;
    // one perturbed-simulation output; all trial-level randomness is a
    // pure function of trial_seed, so every sample sees the same theta_r
    virtual TrialOutput trial_output(const ParamAssignment& genome,
                                     std::uint64_t trial_seed) const = 0;

    ParamAssignment draw_genome(std::uint64_t master_seed, int sample) const {
        return instantiate(genome_spec(),
                           derive_seed(master_seed,
                                       {hash_str("genome"), static_cast<std::uint64_t>(sample)}));
    }

    std::vector<std::string> feature_names() const {
        std::vector<std::string> names;
        for (const auto& tok : genome_spec().tokens) names.push_back(tok.name);
        return names;
    }

    std::vector<FeatureKind> feature_kinds() const {
        std::vector<FeatureKind> kinds;
        for (const auto& tok : genome_spec().tokens)
            kinds.push_back(tok.kind == RandToken::Kind::choice ? FeatureKind::categorical
                                                                : FeatureKind::numeric);
        return kinds;
    }

    std::vector<double> features(const ParamAssignment& genome) const {
        std::vector<double> x;
        for (const auto& tok : genome_spec().tokens) {
            auto it = genome.values.find(tok.name);
            if (it == genome.values.end())
                throw MissingValue("no value for token `" + tok.name + "`");
            x.push_back(it->second);
        }
        return x;
    }
};

// ---------------------------------------------------------------------------
// Radiation-response ODE model: 39 genome features (30 rates, rbStatus,
// 8 mutation coefficients), 4 outcome classes, trajectory similarity over
// all 28 entities.

inline const std::string& radiation_param_template() {
    static const std::string text = R"(# Post-irradiation cell-fate parameters.
# Randomized entries form the per-sample genome; fixed entries are shared.
kRadDecay = $uniform(0.5,1.1, name='kRadDecay')$
kBreak = $uniform(0.4,1.2, name='kBreak')$
kCapBind = $uniform(1.5,4.5, name='kCapBind')$
kCapProd = $uniform(0.5,2.5, name='kCapProd')$
kCapMax = 1.0
kCapDecay = $uniform(0.15,0.45, name='kCapDecay')$
kCappedMature = $uniform(0.3,1.5, name='kCappedMature')$
kFix = $uniform(0.3,1.5, name='kFix')$
kP53Basal = $uniform(0.25,0.75, name='kP53Basal')$
kP53Dephos = $uniform(0.5,1.5, name='kP53Dephos')$
KmDephos = 0.3
kP53Mdm2Deg = $uniform(0.5,1.5, name='kP53Mdm2Deg')$
KmMdm2Deg = 0.3
kP53Phos = $uniform(0.5,3, name='kP53Phos')$
KmPhos = 0.3
kP53Decay = 0.5
kMdm2Trans = 0.5
kMdm2Decay = 0.5
kMdm2ArfDeg = 1.0
kMMdm2Basal = 0.05
kMMdm2P53 = 0.5
KmMMdm2 = 1.0
kMMdm2Decay1 = 0.3
kMMdm2Decay2 = 0.2
kWip1Trans = 0.5
kWip1Decay = 0.5
kMWip1Basal = 0.02
kMWip1P53 = 0.3
KmMWip1 = 1.0
kMWip1Decay1 = 0.3
kMWip1Decay2 = 0.2
kAtmAct = $uniform(0.5,3, name='kAtmAct')$
kAtmTotal = 2.0
KmAtmAct = 0.5
kAtmDeact = $uniform(0.25,0.75, name='kAtmDeact')$
KmAtmDeact = 0.5
kBcl2Prod = $uniform(0.15,0.45, name='kBcl2Prod')$
KmBcl2 = 2.0
kBcl2Decay = 0.3
kBclXlProd = $uniform(0.15,0.45, name='kBclXlProd')$
KmBclXl = 2.0
kBclXlDecay = 0.3
kFasLProd = $uniform(0.05,0.6, name='kFasLProd')$
KmFasL = 2.0
kFasLDecay = 0.3
kBaxProd = $uniform(0.2,1.5, name='kBaxProd')$
KmBax = 2.0
kBaxDecay = 0.3
kApaf1Prod = $uniform(0.25,0.75, name='kApaf1Prod')$
KmApaf1 = 2.0
kApaf1Decay = 0.3
kCytCProd = $uniform(0.25,0.75, name='kCytCProd')$
kCytCBaxSens = 4.0
kCytCBaxOff = 0.7
kCytCBcl2Sens = 4.0
kCytCBcl2Off = 0.6
kCytCBclXlSens = 4.0
kCytCBclXlOff = 0.6
kCytCDecay = 0.4
kApopForm = $uniform(0.05,0.2, name='kApopForm')$
kApopDecay = 0.2
kApoFasL = $uniform(0.1,0.5, name='kApoFasL')$
kApoSom = $uniform(0.2,1, name='kApoSom')$
kApoDecay = $uniform(0.3,0.7, name='kApoDecay')$
kE2fProd = 0.5
kE2fDecay = 0.5
kArfProd = 0.5
KmArf = 0.3
kArfDecay = 0.3
kArfMdm2 = 0.5
kP21Prod = $uniform(0.2,1.5, name='kP21Prod')$
KmP21 = 2.0
kP21Decay = 0.3
kEcdk2Prod = 0.3
kEcdk2P21 = $uniform(0.3,0.9, name='kEcdk2P21')$
KmEcdk2 = 0.3
kEcdk2Decay = 0.3
kSiahProd = $uniform(0.2,1.5, name='kSiahProd')$
KmSiah = 2.0
kSiahDecay = 0.3
kRepProd = $uniform(0.2,1.5, name='kRepProd')$
KmRep = 2.0
kRepDecay = 0.3
ka1 = $uniform(2,6, name='ka1')$
ka2 = $uniform(0.3,1.5, name='ka2')$
kArrestRelax = $uniform(1,3, name='kArrestRelax')$
ECDK2_max = 1.0
rbStatus = $choice(0;1, name='rbStatus')$
MUT_p53 = $uniform(0,1, name='MUT_p53')$
MUT_arf = $uniform(0,1, name='MUT_arf')$
MUT_Bax = $uniform(0,1, name='MUT_Bax')$
MUT_Apaf1 = $uniform(0,1, name='MUT_Apaf1')$
MUT_Rb = $uniform(0,1, name='MUT_Rb')$
MUT_myc = $uniform(0,1, name='MUT_myc')$
MUT_Siah = $uniform(0,1, name='MUT_Siah')$
MUT_Reprimo = $uniform(0,1, name='MUT_Reprimo')$
)";
    return text;
}

class RadiationPreset : public Model {
public:
    explicit RadiationPreset(std::string template_text = radiation_param_template())
        : spec_(parse_spec(template_text)) {}

    std::string name() const override { return "radiation"; }
    Task task() const override { return Task::classification; }
    std::vector<double> subsample_schedule() const override {
        return {0.05, 0.10, 0.25, 0.50, 1.0};
    }
    const RandSpec& genome_spec() const override { return spec_; }
    SimilarityConfig similarity_config() const override {
        SimilarityConfig cfg;
        cfg.kind = SimilarityConfig::Kind::trajectory;
        return cfg;
    }

    RadiationParams params_for(const ParamAssignment& genome) const {
        return parse_radiation_params(render(spec_, genome));
    }

    Trajectory simulate(const RadiationParams& params) const {
        return RadiationModel(params).simulate(uniform_grid(10.0, 21), 0.02);
    }

    double outcome(const ParamAssignment& genome) const override {
        return static_cast<double>(classify_radiation(simulate(params_for(genome))));
    }

    TrialOutput trial_output(const ParamAssignment& genome,
                             std::uint64_t trial_seed) const override {
        RadiationParams params = params_for(genome);
        Rng rng = Rng::from_path(trial_seed, {hash_str("radiation-trial")});
        for (const auto& tok : spec_.tokens) {
            double factor = rng.uniform(0.7, 1.3);  // one draw per token, fixed order
            if (tok.kind == RandToken::Kind::choice || tok.name.rfind("MUT_", 0) == 0) continue;
            params.rates[tok.name] *= factor;
        }
        return simulate(params);
    }

private:
    RandSpec spec_;
};

// ---------------------------------------------------------------------------
// Threshold-crossing gene cascade: a three-stage linear cascade whose
// output crossing time (censored at the horizon) is the regression target.

inline const std::string& cascade_template() {
    static const std::string text = R"(# Gene-cascade parameters; `variant` is a discrete promoter variant.
a1 = $uniform(0.3,1.2, name='a1')$
a2 = $uniform(0.3,1.2, name='a2')$
a3 = $uniform(0.3,1.2, name='a3')$
d1 = $uniform(0.3,1.0, name='d1')$
d2 = $uniform(0.3,1.0, name='d2')$
d3 = $uniform(0.3,1.0, name='d3')$
variant = $choice(0;1;2, name='variant')$
)";
    return text;
}

class CascadePreset : public Model {
public:
    CascadePreset() : spec_(parse_spec(cascade_template())) {}

    std::string name() const override { return "custom-ode"; }
    Task task() const override { return Task::regression; }
    std::vector<double> subsample_schedule() const override {
        return {0.05, 0.10, 0.30, 0.60, 1.0};
    }
    const RandSpec& genome_spec() const override { return spec_; }
    SimilarityConfig similarity_config() const override {
        SimilarityConfig cfg;
        cfg.kind = SimilarityConfig::Kind::trajectory;
        return cfg;
    }

    Trajectory simulate(const ParamAssignment& genome, double factor_a, double factor_d) const {
        auto val = [&](const char* n) { return genome.values.at(n); };
        const double a1 = val("a1") * factor_a, a2 = val("a2") * factor_a,
                     a3 = val("a3") * factor_a;
        const double d1 = val("d1") * factor_d, d2 = val("d2") * factor_d,
                     d3 = val("d3") * factor_d;
        const double boost = 1.0 + 0.25 * val("variant");
        auto rhs = [&](const std::vector<double>& y, double, std::vector<double>& dy) {
            dy[0] = a1 - d1 * y[0];
            dy[1] = a2 * y[0] - d2 * y[1];
            dy[2] = a3 * boost * y[1] - d3 * y[2];
        };
        return integrate_ode(rhs, {0.0, 0.0, 0.0}, uniform_grid(kHorizon, 21), 0.02,
                             {"Gene1", "Gene2", "Signal"});
    }

    double outcome(const ParamAssignment& genome) const override {
        auto t = first_crossing_time(simulate(genome, 1.0, 1.0), "Signal", 1.0);
        return t ? *t : kHorizon;  // censored at the horizon
    }

    TrialOutput trial_output(const ParamAssignment& genome,
                             std::uint64_t trial_seed) const override {
        Rng rng = Rng::from_path(trial_seed, {hash_str("cascade-trial")});
        double factor_a = rng.uniform(0.8, 1.2);
        double factor_d = rng.uniform(0.8, 1.2);
        return simulate(genome, factor_a, factor_d);
    }

private:
    static constexpr double kHorizon = 10.0;
    RandSpec spec_;
};

// ---------------------------------------------------------------------------
// Synchronous Boolean fate network: the genome fills in constant inputs and
// mutation flags, the attractor of the rendered network gives the class,
// and each trial flips a random subset of genome bits.

inline const std::string& boolean_template() {
    static const std::string text = R"(# Boolean fate network; genome bits are inputs and mutation flags.
Damage = $choice(0;1, name='damage')$
Onco = $choice(0;1, name='onco')$
Guard = $choice(0;1, name='guard')$
Mobility = $choice(0;1, name='mobility')$
P53 = Damage & !$choice(0;1, name='mut_p53')$
Stress = Onco & !Guard
Casp = P53 | (Damage & Stress)
Apoptosis = Casp
EMT = Onco & !P53
Metastasis = EMT & Mobility & !$choice(0;1, name='mut_emt')$
Osc = !Osc2
Osc2 = Osc
)";
    return text;
}

class BooleanPreset : public Model {
public:
    BooleanPreset() : spec_(parse_spec(boolean_template())) {}

    std::string name() const override { return "boolean"; }
    Task task() const override { return Task::classification; }
    std::vector<double> subsample_schedule() const override {
        return {0.025, 0.05, 0.10, 0.20, 1.0};
    }
    const RandSpec& genome_spec() const override { return spec_; }
    SimilarityConfig similarity_config() const override {
        SimilarityConfig cfg;
        cfg.kind = SimilarityConfig::Kind::categorical;
        return cfg;
    }

    int classify(const ParamAssignment& genome) const {
        BooleanNetwork net = parse_boolean_network(render(spec_, genome));
        AttractorResult res = find_attractor(net, 0, std::size_t{1} << net.node_count());
        return classify_boolean(res, net.node_index("Apoptosis"), net.node_index("Metastasis"));
    }

    double outcome(const ParamAssignment& genome) const override {
        return static_cast<double>(classify(genome));
    }

    TrialOutput trial_output(const ParamAssignment& genome,
                             std::uint64_t trial_seed) const override {
        // theta_r is a flip mask over the genome bits, shared by all samples
        Rng rng = Rng::from_path(trial_seed, {hash_str("boolean-trial")});
        ParamAssignment noisy = genome;
        for (const auto& tok : spec_.tokens)
            if (rng.bernoulli(0.15)) noisy.values[tok.name] = 1.0 - noisy.values[tok.name];
        return classify(noisy);
    }

private:
    RandSpec spec_;
};

// ---------------------------------------------------------------------------
// Layered-DAG unit-flow model: the genome holds the 12 variable arc costs,
// the exit arc of the min-cost path gives the class, and trials rescale
// costs under the selected noise scheme.

inline std::string network_template(int n_variable) {
    std::string text = "# Variable arc costs of the layered flow network.\n";
    for (int k = 0; k < n_variable; ++k) {
        std::string name = "arc" + std::to_string(k);
        text += name + " = $uniform(1,10, name='" + name + "')$\n";
    }
    return text;
}

class NetworkPreset : public Model {
public:
    explicit NetworkPreset(PerturbScheme scheme = PerturbScheme::less_noisy,
                           std::uint64_t topology_seed = kTopologySeed)
        : scheme_(scheme),
          dag_(generate_layered_dag({1, 4, 4, 3}, 0.8, 0.15, 1.0, 10.0, topology_seed)),
          spec_(parse_spec(network_template(static_cast<int>(dag_.variable_arcs.size())))) {}

    std::string name() const override { return "network"; }
    Task task() const override { return Task::classification; }
    std::vector<double> subsample_schedule() const override {
        return {0.04, 0.07, 0.10, 0.13, 0.16};
    }
    const RandSpec& genome_spec() const override { return spec_; }
    SimilarityConfig similarity_config() const override {
        SimilarityConfig cfg;
        cfg.kind = SimilarityConfig::Kind::categorical;
        return cfg;
    }

    const LayeredDag& dag() const { return dag_; }
    PerturbScheme scheme() const { return scheme_; }

    std::vector<double> sample_costs(const ParamAssignment& genome) const {
        std::vector<double> costs = base_costs(dag_);
        for (std::size_t k = 0; k < dag_.variable_arcs.size(); ++k)
            costs[static_cast<std::size_t>(dag_.variable_arcs[k])] =
                genome.values.at("arc" + std::to_string(k));
        return costs;
    }

    double outcome(const ParamAssignment& genome) const override {
        return static_cast<double>(solve_unit_flow(dag_, sample_costs(genome)).exit_class);
    }

    TrialOutput trial_output(const ParamAssignment& genome,
                             std::uint64_t trial_seed) const override {
        std::vector<double> costs = perturb_costs(dag_, scheme_, sample_costs(genome), trial_seed);
        return solve_unit_flow(dag_, costs).exit_class;
    }

    // Chosen so the shipped topology yields all three exit classes with
    // reasonable balance under the default genome distribution.
    static constexpr std::uint64_t kTopologySeed = 105;

private:
    PerturbScheme scheme_;
    LayeredDag dag_;
    RandSpec spec_;
};

inline std::unique_ptr<Model> make_model(const std::string& name,
                                         PerturbScheme scheme = PerturbScheme::less_noisy) {
    if (name == "radiation") return std::make_unique<RadiationPreset>();
    if (name == "custom-ode") return std::make_unique<CascadePreset>();
    if (name == "boolean") return std::make_unique<BooleanPreset>();
    if (name == "network") return std::make_unique<NetworkPreset>(scheme);
    throw ConfigError("unknown model `" + name + "`");
}

}  // namespace simkern
