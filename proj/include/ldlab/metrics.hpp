// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0
//
// Entanglement fidelity and hashing bound of encode-noise-decode composites,
// optimal-decoder evaluation for fixed encodings, and the per-family argmax
// sweeps over the scalar family parameter.

#pragma once

#include "ldlab/channels.hpp"
#include "ldlab/codes.hpp"
#include "ldlab/sdp.hpp"
#include "ldlab/seesaw.hpp"

#include <string>

namespace ldlab::metrics {

using channels::ChoiMatrix;
using channels::KrausChannel;
using fock::Matrix;

struct CompositeChannel {
  codes::CodeEncoding encoder;
  const KrausChannel* channel = nullptr;
  ChoiMatrix decoder;
  int d = 2;
};

// Choi matrix of E = R o N o S on the d-dimensional message space.
ChoiMatrix composite_choi(const CompositeChannel& c);
ChoiMatrix composite_choi(const CompositeChannel& c, const Matrix& super);

// F = <Gamma| (E (x) I)(|Gamma><Gamma|) |Gamma> = Tr(J_E |Gamma><Gamma|)/d.
double entanglement_fidelity(const ChoiMatrix& composite);
double entanglement_fidelity(const CompositeChannel& c);

// Single decoder SDP solve; returns F* and the optimal decoder.
std::pair<double, ChoiMatrix> optimal_decoder_fidelity(
    const codes::CodeEncoding& encoder, const KrausChannel& channel, int d,
    const sdp::SdpOptions& options = {});
std::pair<double, ChoiMatrix> optimal_decoder_fidelity(
    const codes::CodeEncoding& encoder, const Matrix& super, int fock_dim,
    int d, const sdp::SdpOptions& options = {});

// D_E = H(Tr_M' rho_E) - H(rho_E); may be negative (unclamped).
double hashing_bound(const ChoiMatrix& composite);

struct MetricResult {
  double gamma = 0.0;
  double gamma_phi = 0.0;
  double nbar = 0.0;
  int d = 2;
  std::string family;
  std::string metric;  // "fidelity" or "hashing"
  double value = 0.0;
  double param_at_opt = 0.0;
  double mean_energy = 0.0;
  bool converged = true;
};

struct SweepOptions {
  int cutoff = 21;
  double param_tol = 1e-3;       // golden-section tolerance
  sdp::SdpOptions sdp;
  seesaw::SeesawOptions seesaw;  // used by the "optimized" family
};

// Best family member under the energy budget: golden-section search on the
// scalar parameter (Delta or alpha) with the decoder re-optimized per member.
// Families: "cat", "gkp-hex", "sqrt17", "optimized".
MetricResult family_sweep(const std::string& family,
                          const KrausChannel& channel, int d, double nbar,
                          const std::string& metric, const SweepOptions& opt);

}  // namespace ldlab::metrics
