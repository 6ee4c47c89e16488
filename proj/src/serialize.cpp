// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/serialize.hpp"

namespace ldlab::serialize {

json matrix_to_json(const fock::Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"dims", {m.rows(), m.cols()}}, {"re", re}, {"im", im}};
}

fock::Matrix matrix_from_json(const json& j) {
  const auto dims = j.at("dims");
  const Eigen::Index rows = dims.at(0), cols = dims.at(1);
  fock::Matrix m(rows, cols);
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = fock::Cd(re.at(i).at(c).get<double>(),
                         im.at(i).at(c).get<double>());
  return m;
}

json vector_to_json(const fock::Vector& v) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return json{{"dims", {v.size()}}, {"re", re}, {"im", im}};
}

fock::Vector vector_from_json(const json& j) {
  const Eigen::Index n = j.at("dims").at(0);
  fock::Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = fock::Cd(j.at("re").at(i).get<double>(),
                    j.at("im").at(i).get<double>());
  return v;
}

json channel_to_json(const channels::KrausChannel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus) kraus.push_back(matrix_to_json(k));
  return json{{"gamma", ch.gamma},
              {"gamma_phi", ch.gamma_phi},
              {"cutoff", ch.cutoff},
              {"kmax", ch.kraus.empty() ? 0 : ch.kraus.size() - 1},
              {"kraus", kraus},
              {"completeness_residual", ch.completeness_residual}};
}

channels::KrausChannel channel_from_json(const json& j) {
  channels::KrausChannel ch;
  ch.gamma = j.at("gamma");
  ch.gamma_phi = j.at("gamma_phi");
  ch.cutoff = j.at("cutoff");
  ch.completeness_residual = j.at("completeness_residual");
  for (const auto& k : j.at("kraus")) ch.kraus.push_back(matrix_from_json(k));
  return ch;
}

json choi_to_json(const channels::ChoiMatrix& c) {
  return json{{"d_in", c.d_in},
              {"d_out", c.d_out},
              {"tp_residual", c.tp_residual},
              {"matrix", matrix_to_json(c.j)}};
}

channels::ChoiMatrix choi_from_json(const json& j) {
  channels::ChoiMatrix c;
  c.d_in = j.at("d_in");
  c.d_out = j.at("d_out");
  c.tp_residual = j.at("tp_residual");
  c.j = matrix_from_json(j.at("matrix"));
  return c;
}

json code_to_json(const codes::CodeEncoding& code) {
  json words = json::array();
  for (int k = 0; k < code.d; ++k)
    words.push_back(vector_to_json(code.codewords.col(k)));
  return json{{"d", code.d},
              {"cutoff", code.cutoff},
              {"codewords", words},
              {"family_tag", code.family_tag},
              {"params", code.parameter},
              {"mean_energy", code.mean_energy}};
}

codes::CodeEncoding code_from_json(const json& j) {
  codes::CodeEncoding code;
  code.d = j.at("d");
  code.cutoff = j.at("cutoff");
  code.family_tag = j.at("family_tag");
  code.parameter = j.at("params");
  code.mean_energy = j.at("mean_energy");
  code.codewords.resize(code.cutoff + 1, code.d);
  const auto& words = j.at("codewords");
  for (int k = 0; k < code.d; ++k)
    code.codewords.col(k) = vector_from_json(words.at(k));
  return code;
}

}  // namespace ldlab::serialize
