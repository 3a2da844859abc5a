#pragma once

#include <string>

#include "json.hpp"
#include "ppc/hypothesis.hpp"
#include "ppc/measure.hpp"
#include "ppc/paircorr.hpp"
#include "ppc/secondmoment.hpp"

namespace ppc {

using Json = nlohmann::ordered_json;

Json to_json(const Witness& w);
Json to_json(const Verdict& v);
/// Schema `hypothesis-report v1`.
Json to_json(const HypothesisReport& r);
/// Schema `measure-result v1`.
Json to_json(const MeasureResult& r, const LemmaBounds& lemma);
Json to_json(const PairCorrelationResult& r);
/// Schema `second-moment v1`.
Json to_json(const SecondMomentSeries& s);

/// CSV with header `N,V,K,mode,seed,s,a,b,family`.
std::string to_csv(const SecondMomentSeries& s);

/// Shortest round-trip decimal for a double ("%.17g").
std::string format_double(double x);

}  // namespace ppc
