#include "lwpr/laws.hpp"

#include <boost/random/discrete_distribution.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "lwpr/edge_list.hpp"
#include "lwpr/error.hpp"

namespace lwpr {

struct BiDegreeLaw::Sampler {
  boost::random::discrete_distribution<std::uint32_t, double> dist;
};

BiDegreeLaw::BiDegreeLaw(std::vector<Atom> atoms, double mean_tol) {
  if (atoms.empty()) throw ConfigError("bi-degree law has empty support");
  // merge repeated (h,l) and drop zero atoms
  std::map<std::pair<Count, Count>, double> merged;
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.p >= 0.0) || !std::isfinite(a.p)) throw ConfigError("bi-degree law has a negative probability");
    total += a.p;
    if (a.p > 0.0) merged[{a.out, a.in}] += a.p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("bi-degree law probabilities sum to " + std::to_string(total) + ", not 1");
  }
  for (auto& [key, p] : merged) {
    atoms_.push_back({key.first, key.second, p / total});
    mean_out_ += key.first * (p / total);
    mean_in_ += key.second * (p / total);
  }
  if (std::abs(mean_out_ - mean_in_) > mean_tol) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "bi-degree law violates E[out] = E[in]: " << mean_out_ << " vs " << mean_in_;
    throw ConfigError(msg.str());
  }
  std::vector<double> w;
  for (const Atom& a : atoms_) w.push_back(a.p);
  sampler_ = std::make_shared<Sampler>(Sampler{{w.begin(), w.end()}});
}

BiDegreeLaw BiDegreeLaw::point(Count out, Count in) {
  return BiDegreeLaw({{out, in, 1.0}});
}

BiDegreeLaw BiDegreeLaw::independent(const std::vector<double>& out_pmf, const std::vector<double>& in_pmf,
                                     double mean_tol) {
  std::vector<Atom> atoms;
  for (std::size_t h = 0; h < out_pmf.size(); ++h) {
    for (std::size_t l = 0; l < in_pmf.size(); ++l) {
      atoms.push_back({static_cast<Count>(h), static_cast<Count>(l), out_pmf[h] * in_pmf[l]});
    }
  }
  return BiDegreeLaw(std::move(atoms), mean_tol);
}

BiDegreeLaw BiDegreeLaw::parse(const std::string& text, double mean_tol) {
  std::vector<Atom> atoms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    unsigned long h = 0, l = 0;
    double p = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream is(item);
    if (!(is >> h >> c1 >> l >> c2 >> p) || c1 != ':' || c2 != ':') {
      throw ConfigError("cannot parse bi-degree atom '" + item + "' (expected h:l:p)");
    }
    atoms.push_back({static_cast<Count>(h), static_cast<Count>(l), p});
  }
  return BiDegreeLaw(std::move(atoms), mean_tol);
}

BiDegreeLaw BiDegreeLaw::size_biased() const {
  std::vector<Atom> biased;
  for (const Atom& a : atoms_) {
    if (a.out > 0) biased.push_back({a.out, a.in, a.out * a.p / mean_out_});
  }
  if (biased.empty()) throw ConfigError("size-biased law undefined: E[out] = 0");
  double total = 0.0;
  for (auto& a : biased) total += a.p;
  for (auto& a : biased) a.p /= total;
  return BiDegreeLaw(std::move(biased), std::numeric_limits<double>::infinity());
}

double BiDegreeLaw::mass_at_zero_out() const {
  double m = 0.0;
  for (const Atom& a : atoms_) {
    if (a.out == 0) m += a.p;
  }
  return m;
}

std::pair<Count, Count> BiDegreeLaw::sample(RngStream& rng) const {
  if (!sampler_) throw UsageError("sampling from an empty bi-degree law");
  const Atom& a = atoms_[sampler_->dist(rng)];
  return {a.out, a.in};
}

std::string BiDegreeLaw::describe() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) out << ',';
    out << atoms_[i].out << ':' << atoms_[i].in << ':' << format_double(atoms_[i].p);
  }
  return out.str();
}

ScalarLaw ScalarLaw::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  auto num = [&](std::size_t i) {
    if (i >= parts.size()) throw ConfigError("scalar law '" + text + "' is missing a parameter");
    try {
      return std::stod(parts[i]);
    } catch (const std::exception&) {
      throw ConfigError("scalar law '" + text + "' has a non-numeric parameter");
    }
  };
  if (parts.empty()) throw ConfigError("empty scalar law");
  ScalarLaw law;
  const std::string& kind = parts[0];
  if (kind == "const" || kind == "constant") {
    law = constant(num(1));
  } else if (kind == "uniform") {
    law = uniform(num(1), num(2));
  } else if (kind == "exp" || kind == "exponential") {
    law = exponential(num(1));
  } else if (kind == "pareto") {
    law = pareto(num(1), num(2));
  } else {
    throw ConfigError("unknown scalar law kind '" + kind + "'");
  }
  law.validate();
  return law;
}

void ScalarLaw::validate() const {
  switch (kind) {
    case Kind::constant:
      if (!std::isfinite(a)) throw ConfigError("constant law needs a finite value");
      break;
    case Kind::uniform:
      if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw ConfigError("uniform law needs lo < hi");
      break;
    case Kind::exponential:
      if (!(a > 0.0)) throw ConfigError("exponential law needs a positive mean");
      break;
    case Kind::pareto:
      if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("pareto law needs xmin > 0 and index > 0");
      break;
  }
}

double ScalarLaw::sample(RngStream& rng) const {
  switch (kind) {
    case Kind::constant:
      return a;
    case Kind::uniform:
      return a + (b - a) * rng.uniform();
    case Kind::exponential:
      return rng.exponential(1.0 / a);
    case Kind::pareto:
      return a * std::pow(rng.uniform_positive(), -1.0 / b);
  }
  return a;
}

double ScalarLaw::mean() const {
  switch (kind) {
    case Kind::constant:
      return a;
    case Kind::uniform:
      return 0.5 * (a + b);
    case Kind::exponential:
      return a;
    case Kind::pareto:
      return b > 1.0 ? a * b / (b - 1.0) : std::numeric_limits<double>::infinity();
  }
  return a;
}

double ScalarLaw::sup() const {
  switch (kind) {
    case Kind::constant:
      return a;
    case Kind::uniform:
      return b;
    default:
      return std::numeric_limits<double>::infinity();
  }
}

std::string ScalarLaw::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::constant:
      out << "const:" << format_double(a);
      break;
    case Kind::uniform:
      out << "uniform:" << format_double(a) << ':' << format_double(b);
      break;
    case Kind::exponential:
      out << "exp:" << format_double(a);
      break;
    case Kind::pareto:
      out << "pareto:" << format_double(a) << ':' << format_double(b);
      break;
  }
  return out.str();
}

}  // namespace lwpr
