#include "mardot/junction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mardot {

void JunctionParams::set_bias(double v) {
  leads[0].bias = 0.5 * v;
  leads[1].bias = -0.5 * v;
}

double JunctionParams::gamma_ref() const {
  const double g = 0.5 * (leads[0].gamma + leads[1].gamma);
  return g > 0.0 ? g : 1.0;
}

namespace {

[[noreturn]] void reject(const std::string& what) { throw InvalidParameter(what); }

}  // namespace

void validate(const JunctionParams& p) {
  if (!std::isfinite(p.omega) || !std::isfinite(p.u_int)) reject("omega and u_int must be finite");
  double max_gap = 0.0;
  for (Lead l : kLeads) {
    const LeadParams& lp = p.lead(l);
    const std::string tag = lead_name(l);
    if (!(lp.delta > 0.0)) reject("delta_" + tag + " must be > 0");
    if (!(lp.gamma >= 0.0)) reject("gamma_" + tag + " must be >= 0");
    if (!(lp.temperature >= 0.0)) reject("temperature_" + tag + " must be >= 0");
    if (!std::isfinite(lp.g) || !std::isfinite(lp.phase) || !std::isfinite(lp.bias))
      reject("lead " + tag + " has non-finite parameters");
    max_gap = std::max(max_gap, lp.delta);
  }
  if (!(p.dos_epsilon > 0.0)) reject("dos_epsilon must be > 0");
  if (!(p.cutoff > max_gap)) reject("cutoff must exceed every lead gap");
  if (!(p.gamma_loss >= 0.0)) reject("gamma_loss must be >= 0");
  if (!(p.gamma_deph >= 0.0)) reject("gamma_deph must be >= 0");

  const double vl = p.leads[0].bias;
  const double vr = p.leads[1].bias;
  const double scale = std::max({1.0, std::abs(vl), std::abs(vr)});
  if (std::abs(vl + vr) > 1e-12 * scale) {
    std::ostringstream os;
    os << "only symmetric bias V_L = -V_R is supported (got V_L=" << vl << ", V_R=" << vr << ")";
    reject(os.str());
  }
}

const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names{
      "omega",   "u_int",   "U",           "V",             "bias_L",        "bias_R",
      "g",       "g_L",     "g_R",         "phi",           "phi_L",         "phi_R",
      "delta",   "delta_L", "delta_R",     "gamma",         "gamma_L",       "gamma_R",
      "temperature", "temperature_L", "temperature_R", "gamma_loss", "gamma_deph",
      "dos_epsilon", "cutoff"};
  return names;
}

namespace {

// Splits "gamma_L" into ("gamma", left); returns false when there is no lead suffix.
bool split_lead_suffix(std::string_view name, std::string_view& base, Lead& lead) {
  if (name.size() > 2 && name[name.size() - 2] == '_') {
    const char c = name.back();
    if (c == 'L' || c == 'R') {
      base = name.substr(0, name.size() - 2);
      lead = c == 'L' ? Lead::left : Lead::right;
      return true;
    }
  }
  return false;
}

template <class LP>
auto* lead_field(LP& lp, std::string_view base) {
  using Ptr = decltype(&lp.g);
  if (base == "g") return &lp.g;
  if (base == "phi") return &lp.phase;
  if (base == "delta") return &lp.delta;
  if (base == "gamma") return &lp.gamma;
  if (base == "bias") return &lp.bias;
  if (base == "temperature") return &lp.temperature;
  return Ptr{nullptr};
}

template <class JP>
auto* scalar_field(JP& p, std::string_view name) {
  using Ptr = decltype(&p.omega);
  if (name == "omega") return &p.omega;
  if (name == "u_int" || name == "U") return &p.u_int;
  if (name == "gamma_loss") return &p.gamma_loss;
  if (name == "gamma_deph") return &p.gamma_deph;
  if (name == "dos_epsilon") return &p.dos_epsilon;
  if (name == "cutoff") return &p.cutoff;
  return Ptr{nullptr};
}

}  // namespace

void set_parameter(JunctionParams& p, std::string_view name, double value) {
  if (name == "V") {
    p.set_bias(value);
    return;
  }
  if (double* f = scalar_field(p, name)) {
    *f = value;
    return;
  }
  std::string_view base;
  Lead lead{};
  if (split_lead_suffix(name, base, lead)) {
    if (double* f = lead_field(p.lead(lead), base)) {
      *f = value;
      return;
    }
  } else if (name != "bias") {
    double* fl = lead_field(p.lead(Lead::left), name);
    double* fr = lead_field(p.lead(Lead::right), name);
    if (fl && fr) {
      *fl = value;
      *fr = value;
      return;
    }
  }
  throw InvalidParameter("unknown parameter '" + std::string(name) + "'");
}

double get_parameter(const JunctionParams& p, std::string_view name) {
  if (name == "V") return p.bias();
  if (const double* f = scalar_field(p, name)) return *f;
  std::string_view base;
  Lead lead{};
  if (split_lead_suffix(name, base, lead)) {
    if (const double* f = lead_field(p.lead(lead), base)) return *f;
  } else if (name != "bias") {
    if (const double* f = lead_field(p.lead(Lead::left), name)) return *f;
  }
  throw InvalidParameter("unknown parameter '" + std::string(name) + "'");
}

namespace {

Matrix4c ket_bra(int i, int j) {
  Matrix4c m = Matrix4c::Zero();
  m(i, j) = 1.0;
  return m;
}

constexpr int kEmpty = 0;
constexpr int kDown = 1;
constexpr int kUp = 2;
constexpr int kPair = 3;

}  // namespace

DotOperators build_dot_operators() {
  DotOperators d;
  d.c_down = ket_bra(kEmpty, kDown) + ket_bra(kUp, kPair);
  d.c_up = ket_bra(kEmpty, kUp) - ket_bra(kDown, kPair);
  return d;
}

namespace ops {
Matrix4c c_down() { return build_dot_operators().c_down; }
Matrix4c c_up() { return build_dot_operators().c_up; }
Matrix4c number_down() { return c_down().adjoint() * c_down(); }
Matrix4c number_up() { return c_up().adjoint() * c_up(); }
Matrix4c number() { return number_down() + number_up(); }
Matrix4c pair_creation() { return c_up().adjoint() * c_down().adjoint(); }
Matrix4c even_projector() { return ket_bra(kEmpty, kEmpty) + ket_bra(kPair, kPair); }
Matrix4c odd_projector() { return ket_bra(kDown, kDown) + ket_bra(kUp, kUp); }
}  // namespace ops

Matrix4c dot_hamiltonian(const JunctionParams& p) {
  return p.omega * ops::number() + p.u_int * ops::number_up() * ops::number_down();
}

Matrix4c hamiltonian_at(double t, const JunctionParams& p) {
  const DotOperators d = build_dot_operators();
  const Matrix4c pair_annihilation = d.c_down * d.c_up;
  cplx drive = 0.0;
  for (Lead l : kLeads) {
    const LeadParams& lp = p.lead(l);
    drive += lp.pair_amplitude() * std::exp(kI * (2.0 * lp.bias * t));
  }
  const Matrix4c coupling = drive * pair_annihilation;
  return dot_hamiltonian(p) + coupling + coupling.adjoint();
}

}  // namespace mardot
