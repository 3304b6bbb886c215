//
// Copyright 2026 The simplexcert Authors
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
//

#ifndef SIMPLEXCERT_ENSEMBLE_HPP_
#define SIMPLEXCERT_ENSEMBLE_HPP_

#include <string>

#include "simplexcert/core.hpp"
#include "simplexcert/errors.hpp"
#include "simplexcert/mechanisms.hpp"

namespace simplexcert {

// The mechanisms combined into one certificate. Softmax expectations admit
// only the differential-privacy mechanisms.
class EnsembleConfig {
 public:
  static EnsembleConfig create(MechanismSet enabled, ExpectationMode mode) {
    if (enabled.empty()) {
      throw ValidationError("an ensemble needs at least one mechanism");
    }
    for (MechanismId id : enabled.members()) {
      if (!supports(id, mode)) {
        throw ValidationError(std::string(to_string(id)) +
                              " cannot certify softmax expectations");
      }
    }
    return EnsembleConfig(enabled, mode);
  }

  // Every mechanism the mode supports.
  static EnsembleConfig full(ExpectationMode mode) {
    MechanismSet set;
    for (MechanismId id : kAllMechanisms) {
      if (supports(id, mode)) set.insert(id);
    }
    return EnsembleConfig(set, mode);
  }

  MechanismSet enabled() const { return enabled_; }
  ExpectationMode mode() const { return mode_; }

 private:
  EnsembleConfig(MechanismSet enabled, ExpectationMode mode)
      : enabled_(enabled), mode_(mode) {}
  MechanismSet enabled_;
  ExpectationMode mode_;
};

// Evaluates every enabled mechanism on the same bounds and keeps the
// largest radius. Reusing one set of bounds needs no further alpha split.
inline CertificationOutcome certify_ensemble(
    const ExpectationBounds& b, const NoiseConfig& noise,
    const EnsembleConfig& cfg, const OptimizerSettings& opt = {}) {
  if (cfg.mode() != b.mode()) {
    throw ValidationError(
        "ensemble configured for " + std::string(to_string(cfg.mode())) +
        " expectations but bounds are " + std::string(to_string(b.mode())));
  }
  CertificationOutcome::Radii radii{};
  for (MechanismId id : cfg.enabled().members()) {
    radii[index_of(id)] = certify(id, b, noise, opt);
  }
  return CertificationOutcome::from_radii(b.predicted_class(), radii,
                                          cfg.enabled());
}

}  // namespace simplexcert

#endif  // SIMPLEXCERT_ENSEMBLE_HPP_
