#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cylhypo/classifier.hpp"
#include "cylhypo/counterexamples.hpp"
#include "cylhypo/error.hpp"
#include "cylhypo/oracles.hpp"
#include "cylhypo/solver.hpp"
#include "cylhypo/spectral.hpp"

namespace cylhypo::cli {

using json = nlohmann::ordered_json;

/// Non-finite doubles become null.
json num(double v);
json to_json(cplx z);  // [re, im]
json to_json(const ComplexPolynomial& p);
json to_json(const TrigPolynomial& f);
json to_json(const OperatorSpec& op);
json to_json(const CylinderGrid& g);
json to_json(const ZeroWitness& w);
json to_json(const ZeroSearch& z);
json to_json(const LowerBoundResult& r);
json to_json(const Classification& c);
json to_json(const DecayFit& f);
json to_json(const MembershipReport& m, bool with_profiles);
json to_json(const SolveReport& r);
json to_json(const TubeReduction& r);
json to_json(const SignChangeReport& r);
json to_json(const PlaneWaveReport& r);
json to_json(const TubeWitnessReport& r);
json to_json(const LaplaceReport& r);
json to_json(const oracles::LemmaResult& r);
json to_json(const Error& e);

/// Report body text: 2-space indent, trailing newline.
std::string dump(const json& j);

/// %.17g
std::string fmt17(double v);

std::string csv_grid(const GridFunction& f);          // t,x,re,im
std::string csv_spectrum(const MixedSpectrum& F);     // k,xi,re,im
std::string csv_columns(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols);

/// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace cylhypo::cli
