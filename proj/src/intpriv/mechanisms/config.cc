// Copyright 2026 The Interval Privacy Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "intpriv/mechanisms/config.h"

#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"
#include "intpriv/core/record.h"

namespace intpriv {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool InUnit(double x) { return x >= 0.0 && x <= 1.0; }

absl::Status FieldError(absl::string_view field, absl::string_view detail) {
  return InvalidArgument("ValidationError", absl::StrCat(field, ": ", detail));
}

// Runs a JSON accessor block, turning nlohmann exceptions into ParseError.
template <class F>
auto Guarded(absl::string_view what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    return InvalidArgument("ParseError", absl::StrCat(what, ": ", e.what()));
  }
}

}  // namespace

absl::StatusOr<MechanismConfig> MechanismConfig::Make(
    Topology topology, size_t ranges, AnchorSampler sampler, AcceptableRegion acceptable,
    std::optional<SelectiveParams> selective, std::optional<ProgressiveParams> progressive,
    std::optional<MonotoneTransform> transform) {
  if (topology == Topology::kGeneral) {
    return FieldError("topology", "must be canonical or ring");
  }
  if (ranges < 2) return FieldError("ranges", "need at least 2 ranges");
  const size_t want = topology == Topology::kCanonical ? ranges - 1 : ranges;
  if (sampler.count() != want) {
    return FieldError("sampler.count",
                      absl::StrCat("expected ", want, " anchors, sampler draws ",
                                   sampler.count()));
  }
  if (acceptable.kind == AcceptableRegion::Kind::kPartitionIndices) {
    for (size_t k : acceptable.indices) {
      if (k < 1 || k > ranges) return FieldError("acceptable.indices", "index out of range");
    }
  }
  if (selective) {
    if (!InUnit(selective->tau)) return FieldError("selective.tau", "must be in [0, 1]");
    if (!InUnit(selective->rho)) return FieldError("selective.rho", "must be in [0, 1]");
  }
  if (progressive) {
    if (progressive->max_rounds < 1) return FieldError("progressive.max_rounds", "must be >= 1");
    if (!InUnit(progressive->tau)) return FieldError("progressive.tau", "must be in [0, 1]");
    if (progressive->tau > 0.0 && !progressive->prior) {
      return FieldError("progressive.prior", "required when tau > 0");
    }
    if (topology != Topology::kCanonical) {
      return FieldError("topology", "progressive flows use canonical topology");
    }
    if (transform) return FieldError("transform", "not supported with progressive flows");
  }
  MechanismConfig cfg(topology, ranges, std::move(sampler));
  cfg.acceptable_ = std::move(acceptable);
  cfg.selective_ = std::move(selective);
  cfg.progressive_ = std::move(progressive);
  cfg.transform_ = std::move(transform);
  return cfg;
}

absl::StatusOr<MechanismConfig> MechanismConfig::CaseOne(Distribution law) {
  INTPRIV_ASSIGN_OR_RETURN(AnchorSampler s, AnchorSampler::Iid(std::move(law), 1));
  return Make(Topology::kCanonical, 2, std::move(s));
}

MechanismConfig MechanismConfig::WithTransform(MonotoneTransform g) const {
  MechanismConfig c = *this;
  c.transform_ = std::move(g);
  return c;
}

MechanismConfig MechanismConfig::WithSampler(AnchorSampler s) const {
  MechanismConfig c = *this;
  c.sampler_ = std::move(s);
  return c;
}

json DistributionToJson(const Distribution& d) {
  return std::visit(
      Overloaded{
          [](const UniformLaw& l) -> json {
            return {{"kind", "uniform"}, {"a", l.a}, {"b", l.b}};
          },
          [](const LogisticLaw& l) -> json {
            return {{"kind", "logistic"}, {"loc", l.loc}, {"scale", l.scale}};
          },
          [](const GaussianLaw& l) -> json {
            return {{"kind", "gaussian"}, {"mean", l.mean}, {"sd", l.sd}};
          },
          [](const TwoGaussianMixtureLaw& l) -> json {
            return {{"kind", "mixture"}, {"weight", l.weight}, {"mean_a", l.mean_a},
                    {"mean_b", l.mean_b}, {"sigma", l.sigma}};
          },
          [](const GridLaw& l) -> json {
            return {{"kind", "grid"}, {"x", l.x}, {"density", l.density}};
          },
      },
      d.law());
}

absl::StatusOr<Distribution> DistributionFromJson(const json& j) {
  return Guarded("law", [&]() -> absl::StatusOr<Distribution> {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform") return Distribution::Uniform(j.at("a"), j.at("b"));
    if (kind == "logistic") {
      return Distribution::Logistic(j.value("loc", 0.0), j.at("scale").get<double>());
    }
    if (kind == "gaussian") {
      return Distribution::Gaussian(j.value("mean", 0.0), j.at("sd").get<double>());
    }
    if (kind == "mixture") {
      return Distribution::TwoGaussianMixture(j.at("weight"), j.at("mean_a"), j.at("mean_b"),
                                              j.at("sigma"));
    }
    if (kind == "grid") {
      return Distribution::Grid(j.at("x").get<std::vector<double>>(),
                                j.at("density").get<std::vector<double>>());
    }
    return InvalidArgument("ParseError", absl::StrCat("unknown law kind ", kind));
  });
}

json SamplerToJson(const AnchorSampler& s) {
  switch (s.shape()) {
    case AnchorSampler::Shape::kIid:
      return {{"law", DistributionToJson(s.base_law())}, {"count", s.count()}};
    case AnchorSampler::Shape::kCentered:
      return {{"law", DistributionToJson(s.base_law())}, {"offsets", s.offsets()}};
    case AnchorSampler::Shape::kPerAnchor: {
      json laws = json::array();
      for (const auto& l : s.laws()) laws.push_back(DistributionToJson(l));
      return {{"per_anchor", laws}};
    }
  }
  return nullptr;
}

absl::StatusOr<AnchorSampler> SamplerFromJson(const json& j) {
  return Guarded("sampler", [&]() -> absl::StatusOr<AnchorSampler> {
    if (j.contains("per_anchor")) {
      std::vector<Distribution> laws;
      for (const json& lj : j.at("per_anchor")) {
        INTPRIV_ASSIGN_OR_RETURN(Distribution d, DistributionFromJson(lj));
        laws.push_back(std::move(d));
      }
      return AnchorSampler::PerAnchor(std::move(laws));
    }
    INTPRIV_ASSIGN_OR_RETURN(Distribution law, DistributionFromJson(j.at("law")));
    if (j.contains("offsets")) {
      return AnchorSampler::Centered(std::move(law), j.at("offsets").get<std::vector<double>>());
    }
    return AnchorSampler::Iid(std::move(law), j.at("count").get<size_t>());
  });
}

json PriorToJson(const Prior& p) {
  if (const Distribution* d = p.distribution()) {
    return {{"kind", "distribution"}, {"law", DistributionToJson(*d)}};
  }
  if (const StepCdf* s = p.step_cdf()) {
    json jumps = json::array();
    for (const auto& jp : s->jumps()) jumps.push_back({jp.x, jp.cdf});
    return {{"kind", "step"},
            {"jumps", jumps},
            {"provenance", std::string(ProvenanceName(p.provenance()))}};
  }
  return nullptr;
}

absl::StatusOr<Prior> PriorFromJson(const json& j) {
  return Guarded("prior", [&]() -> absl::StatusOr<Prior> {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "distribution") {
      INTPRIV_ASSIGN_OR_RETURN(Distribution d, DistributionFromJson(j.at("law")));
      return Prior(std::move(d));
    }
    if (kind == "step") {
      std::vector<StepCdf::Jump> jumps;
      for (const json& jp : j.at("jumps")) jumps.push_back({jp.at(0), jp.at(1)});
      INTPRIV_ASSIGN_OR_RETURN(StepCdf s, StepCdf::FromJumps(std::move(jumps)));
      const std::string prov = j.value("provenance", "empirical");
      PriorProvenance p = PriorProvenance::kEmpirical;
      if (prov == "NPMLE-plug-in") p = PriorProvenance::kNpmlePlugIn;
      if (prov == "known-CDF") p = PriorProvenance::kKnownCdf;
      return Prior(std::move(s), p);
    }
    return InvalidArgument("ParseError", absl::StrCat("unknown prior kind ", kind));
  });
}

json MechanismConfig::ToJson() const {
  json j;
  j["schema"] = kConfigSchemaVersion;
  j["topology"] = topology_ == Topology::kRing ? "ring" : "canonical";
  j["ranges"] = num_ranges_;
  j["sampler"] = SamplerToJson(sampler_);
  switch (acceptable_.kind) {
    case AcceptableRegion::Kind::kNone:
      j["acceptable"] = nullptr;
      break;
    case AcceptableRegion::Kind::kFixedRange:
      j["acceptable"] = {{"kind", "range"}, {"range", RangeToJson(acceptable_.range)}};
      break;
    case AcceptableRegion::Kind::kPartitionIndices:
      j["acceptable"] = {{"kind", "indices"}, {"indices", acceptable_.indices}};
      break;
  }
  j["selective"] = selective_ ? json{{"tau", selective_->tau},
                                     {"rho", selective_->rho},
                                     {"prior", PriorToJson(selective_->prior)}}
                              : json(nullptr);
  if (progressive_) {
    j["progressive"] = {{"max_rounds", progressive_->max_rounds},
                        {"tau", progressive_->tau},
                        {"law", progressive_->truncated_base ? "truncated" : "uniform"},
                        {"prior", progressive_->prior ? PriorToJson(*progressive_->prior)
                                                      : json(nullptr)}};
  } else {
    j["progressive"] = nullptr;
  }
  j["transform"] = transform_ ? transform_->ToJson() : json(nullptr);
  return j;
}

absl::StatusOr<MechanismConfig> MechanismConfig::FromJson(const json& j) {
  return Guarded("mechanism", [&]() -> absl::StatusOr<MechanismConfig> {
    if (!j.is_object()) return InvalidArgument("ParseError", "mechanism must be an object");
    if (j.value("schema", kConfigSchemaVersion) != kConfigSchemaVersion) {
      return FieldError("schema", "unsupported version");
    }
    const std::string topo = j.value("topology", "canonical");
    Topology topology;
    if (topo == "canonical") {
      topology = Topology::kCanonical;
    } else if (topo == "ring") {
      topology = Topology::kRing;
    } else {
      return FieldError("topology", "must be canonical or ring");
    }
    INTPRIV_ASSIGN_OR_RETURN(AnchorSampler sampler, SamplerFromJson(j.at("sampler")));
    const size_t ranges = j.contains("ranges")
                              ? j.at("ranges").get<size_t>()
                              : sampler.count() + (topology == Topology::kCanonical ? 1 : 0);
    AcceptableRegion acc;
    if (j.contains("acceptable") && !j["acceptable"].is_null()) {
      const json& a = j["acceptable"];
      const std::string kind = a.at("kind").get<std::string>();
      if (kind == "range") {
        INTPRIV_ASSIGN_OR_RETURN(Range r, RangeFromJson(a.at("range")));
        acc = AcceptableRegion::Fixed(std::move(r));
      } else if (kind == "indices") {
        acc = AcceptableRegion::Indices(a.at("indices").get<std::vector<size_t>>());
      } else {
        return FieldError("acceptable.kind", "must be range or indices");
      }
    }
    std::optional<SelectiveParams> sel;
    if (j.contains("selective") && !j["selective"].is_null()) {
      const json& s = j["selective"];
      INTPRIV_ASSIGN_OR_RETURN(Prior prior, PriorFromJson(s.at("prior")));
      sel = SelectiveParams{s.at("tau").get<double>(), s.at("rho").get<double>(),
                            std::move(prior)};
    }
    std::optional<ProgressiveParams> prog;
    if (j.contains("progressive") && !j["progressive"].is_null()) {
      const json& p = j["progressive"];
      ProgressiveParams pp;
      pp.max_rounds = p.value("max_rounds", 3);
      pp.tau = p.value("tau", 0.0);
      const std::string law = p.value("law", "uniform");
      if (law != "uniform" && law != "truncated") {
        return FieldError("progressive.law", "must be uniform or truncated");
      }
      pp.truncated_base = law == "truncated";
      if (p.contains("prior") && !p["prior"].is_null()) {
        INTPRIV_ASSIGN_OR_RETURN(Prior prior, PriorFromJson(p["prior"]));
        pp.prior = std::move(prior);
      }
      prog = std::move(pp);
    }
    std::optional<MonotoneTransform> g;
    if (j.contains("transform") && !j["transform"].is_null()) {
      INTPRIV_ASSIGN_OR_RETURN(g, MonotoneTransform::FromJson(j["transform"]));
    }
    return Make(topology, ranges, std::move(sampler), std::move(acc), std::move(sel),
                std::move(prog), std::move(g));
  });
}

}  // namespace intpriv
