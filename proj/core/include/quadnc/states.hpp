#ifndef QUADNC_STATES_HPP
#define QUADNC_STATES_HPP

#include <string>
#include <utility>
#include <vector>

namespace quadnc {

enum class StateFamily {
    Coherent,
    Thermal,
    Fock,
    SqueezedCoherent,
    Spacs,
    CoherentMixture,
    PhaseAveragedCoherent,
    OddCat,
};

enum class ClassLabel : int {
    Classical = 0,
    Nonclassical = 1,
};

// Generative model for one homodyne run: a state family plus the physical
// parameters it reads. Fields irrelevant to `family` are ignored.
struct StateSpec {
    StateFamily family = StateFamily::Coherent;
    double alpha = 0.0; // coherent amplitude (real)
    double nbar = 0.0;  // mean photon number, >= 0
    int n = 0;          // photon number, >= 0
    double xi = 0.0;    // squeezing magnitude, >= 0
    double eta = 1.0;   // quantum efficiency, in (0, 1]
    double phi = 0.0;   // quadrature angle, radians

    static StateSpec coherent(double alpha, double eta, double phi);
    static StateSpec thermal(double nbar, double eta, double phi);
    static StateSpec fock(int n, double eta, double phi);
    static StateSpec squeezed(double alpha, double xi, double eta, double phi);
    static StateSpec spacs(double alpha, double eta, double phi);
    static StateSpec mixture(double alpha, double eta, double phi);
    static StateSpec phase_averaged(double alpha, double eta, double phi);
    static StateSpec cat(double alpha, double eta, double phi);
};

ClassLabel label_for(StateFamily family);

const char* family_name(StateFamily family);
StateFamily family_from_name(const std::string& name);
std::vector<std::string> family_names();

// Throws ParameterError when a field the family reads is out of range.
void validate(const StateSpec& spec);

// Quadrature probability density p(x, phi) at overall efficiency eta.
// Throws ParameterError on an invalid spec and InputError on non-finite x.
double density(const StateSpec& spec, double x);

// density() on a uniform npoints grid over [xmin, xmax], npoints >= 2.
std::vector<std::pair<double, double>> density_grid(const StateSpec& spec,
                                                    double xmin, double xmax,
                                                    int npoints);

// 1 - integral of density over [-8, 8], by composite Gauss-Legendre.
double tail_mass(const StateSpec& spec);

// Measurement window shared by sampler and featurizer.
inline constexpr double kXMin = -8.0;
inline constexpr double kXMax = 8.0;

} // namespace quadnc

#endif
