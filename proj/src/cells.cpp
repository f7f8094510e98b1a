#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dcqaoa/cells.hpp"
#include "dcqaoa/errors.hpp"

namespace dcqaoa::metalearn {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMat = Eigen::Map<const RowMatrix>;
using Mat = Eigen::Map<RowMatrix>;
using ConstVec = Eigen::Map<const Eigen::VectorXd>;
using Vec = Eigen::Map<Eigen::VectorXd>;

const std::vector<std::string> kLstmMatrices = {"W_f", "W_i", "W_c", "W_o",
                                                "R_f", "R_i", "R_c", "R_o"};
const std::vector<std::string> kLstmVectors = {"b_f", "b_i", "b_c", "b_o"};
const std::vector<std::string> kGruMatrices = {"W_z", "W_r", "W_h",
                                               "R_z", "R_r", "R_h"};
const std::vector<std::string> kGruVectors = {"b_z", "b_r", "b_h",
                                              "d_z", "d_r", "d_h"};

Eigen::VectorXd sigmoid(const Eigen::VectorXd& a) {
  return a.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Eigen::VectorXd tanh_vec(const Eigen::VectorXd& a) {
  return a.unaryExpr([](double v) { return std::tanh(v); });
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(want) + ", got " +
                                std::to_string(got));
  }
}

void check_finite(std::span<const double> v, const char* what) {
  if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); }))
    throw NumericalError(std::string(what) + " contains non-finite values");
}

// Block views over the flat weight vector.
struct Views {
  const CellWeights& w;
  std::size_t d;
  ConstMat m(std::string_view name) const {
    return ConstMat(w.block(name).data(), static_cast<Eigen::Index>(d),
                    static_cast<Eigen::Index>(d));
  }
  ConstVec v(std::string_view name) const {
    return ConstVec(w.block(name).data(), static_cast<Eigen::Index>(d));
  }
};

struct GradViews {
  const CellWeights& w;
  std::span<double> grad;
  std::size_t d;
  Mat m(std::string_view name) const {
    const auto off = static_cast<std::size_t>(w.block(name).data() - w.flat().data());
    return Mat(grad.data() + off, static_cast<Eigen::Index>(d),
               static_cast<Eigen::Index>(d));
  }
  Vec v(std::string_view name) const {
    const auto off = static_cast<std::size_t>(w.block(name).data() - w.flat().data());
    return Vec(grad.data() + off, static_cast<Eigen::Index>(d));
  }
};

}  // namespace

std::string_view to_string(CellKind kind) {
  return kind == CellKind::LSTM ? "lstm" : "gru";
}

CellKind parse_cell_kind(std::string_view name) {
  if (name == "lstm") return CellKind::LSTM;
  if (name == "gru") return CellKind::GRU;
  throw std::invalid_argument("unknown cell kind '" + std::string(name) + "'");
}

CellWeights::CellWeights(CellKind kind, std::size_t dim)
    : kind_(kind), dim_(dim), data_(count(kind, dim), 0.0) {
  if (dim < 1) throw std::invalid_argument("cell dimension must be >= 1");
}

std::size_t CellWeights::count(CellKind kind, std::size_t d) {
  return kind == CellKind::LSTM ? 8 * d * d + 4 * d : 6 * d * d + 6 * d;
}

const std::vector<std::string>& CellWeights::matrix_names(CellKind kind) {
  return kind == CellKind::LSTM ? kLstmMatrices : kGruMatrices;
}

const std::vector<std::string>& CellWeights::vector_names(CellKind kind) {
  return kind == CellKind::LSTM ? kLstmVectors : kGruVectors;
}

std::size_t CellWeights::offset(std::string_view name) const {
  const auto& mats = matrix_names(kind_);
  const auto& vecs = vector_names(kind_);
  const std::size_t dd = dim_ * dim_;
  for (std::size_t k = 0; k < mats.size(); ++k)
    if (mats[k] == name) return k * dd;
  for (std::size_t k = 0; k < vecs.size(); ++k)
    if (vecs[k] == name) return mats.size() * dd + k * dim_;
  throw std::invalid_argument("no weight block named '" + std::string(name) + "'");
}

std::span<double> CellWeights::block(std::string_view name) {
  const bool is_matrix = name[0] == 'W' || name[0] == 'R';
  return std::span<double>(data_).subspan(offset(name),
                                          is_matrix ? dim_ * dim_ : dim_);
}

std::span<const double> CellWeights::block(std::string_view name) const {
  const bool is_matrix = name[0] == 'W' || name[0] == 'R';
  return std::span<const double>(data_).subspan(offset(name),
                                                is_matrix ? dim_ * dim_ : dim_);
}

CellState zero_state(CellKind kind, std::size_t dim) {
  CellState s;
  s.h.assign(dim, 0.0);
  if (kind == CellKind::LSTM) s.c.assign(dim, 0.0);
  return s;
}

std::vector<double> output_map(std::span<const double> h) {
  std::vector<double> theta(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) theta[k] = std::numbers::pi * h[k];
  return theta;
}

StepTape forward_step(const CellWeights& weights, std::span<const double> x,
                      const CellState& state) {
  const std::size_t d = weights.dim();
  check_dim(x.size(), d, "cell input");
  check_dim(state.h.size(), d, "hidden state");
  check_finite(x, "cell input");
  check_finite(state.h, "hidden state");

  const Views w{weights, d};
  const ConstVec xv(x.data(), static_cast<Eigen::Index>(d));
  const ConstVec hv(state.h.data(), static_cast<Eigen::Index>(d));

  StepTape tape;
  tape.x.assign(x.begin(), x.end());
  tape.h_prev = state.h;

  if (weights.kind() == CellKind::LSTM) {
    check_dim(state.c.size(), d, "cell state");
    check_finite(state.c, "cell state");
    const ConstVec cv(state.c.data(), static_cast<Eigen::Index>(d));
    const Eigen::VectorXd f = sigmoid(w.m("W_f") * xv + w.m("R_f") * hv + w.v("b_f"));
    const Eigen::VectorXd i = sigmoid(w.m("W_i") * xv + w.m("R_i") * hv + w.v("b_i"));
    const Eigen::VectorXd g = tanh_vec(w.m("W_c") * xv + w.m("R_c") * hv + w.v("b_c"));
    const Eigen::VectorXd c = f.cwiseProduct(cv) + i.cwiseProduct(g);
    const Eigen::VectorXd o = sigmoid(w.m("W_o") * xv + w.m("R_o") * hv + w.v("b_o"));
    const Eigen::VectorXd tc = tanh_vec(c);
    tape.c_prev = state.c;
    tape.a = to_std(f);
    tape.b = to_std(i);
    tape.g = to_std(g);
    tape.o = to_std(o);
    tape.c = to_std(c);
    tape.tanh_c = to_std(tc);
    tape.h = to_std(o.cwiseProduct(tc));
  } else {
    const Eigen::VectorXd z =
        sigmoid(w.m("W_z") * xv + w.m("R_z") * hv + w.v("b_z") + w.v("d_z"));
    const Eigen::VectorXd r =
        sigmoid(w.m("W_r") * xv + w.m("R_r") * hv + w.v("b_r") + w.v("d_r"));
    const Eigen::VectorXd u = w.m("R_h") * hv + w.v("d_h");
    const Eigen::VectorXd g =
        tanh_vec(w.m("W_h") * xv + r.cwiseProduct(u) + w.v("b_h"));
    const Eigen::VectorXd h =
        z.cwiseProduct(hv) + (Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d)) - z)
                                 .cwiseProduct(g);
    tape.a = to_std(z);
    tape.b = to_std(r);
    tape.o = to_std(u);
    tape.g = to_std(g);
    tape.h = to_std(h);
  }
  return tape;
}

StepGradients backward_step(const CellWeights& weights, const StepTape& tape,
                            std::span<const double> dh,
                            std::span<const double> dc, std::span<double> grad) {
  const std::size_t d = weights.dim();
  const auto di = static_cast<Eigen::Index>(d);
  check_dim(dh.size(), d, "dh");
  check_dim(grad.size(), weights.size(), "weight gradient");

  const Views w{weights, d};
  const GradViews gw{weights, grad, d};
  const ConstVec x(tape.x.data(), di);
  const ConstVec h_prev(tape.h_prev.data(), di);
  const ConstVec dhv(dh.data(), di);
  StepGradients out;

  if (weights.kind() == CellKind::LSTM) {
    check_dim(dc.size(), d, "dc");
    const ConstVec f(tape.a.data(), di), i(tape.b.data(), di), g(tape.g.data(), di),
        o(tape.o.data(), di), tc(tape.tanh_c.data(), di), c_prev(tape.c_prev.data(), di);
    const ConstVec dcv(dc.data(), di);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(di);

    const Eigen::VectorXd dcell =
        dhv.cwiseProduct(o).cwiseProduct(ones - tc.cwiseProduct(tc)) + dcv;
    const Eigen::VectorXd da_o =
        dhv.cwiseProduct(tc).cwiseProduct(o).cwiseProduct(ones - o);
    const Eigen::VectorXd da_f =
        dcell.cwiseProduct(c_prev).cwiseProduct(f).cwiseProduct(ones - f);
    const Eigen::VectorXd da_i =
        dcell.cwiseProduct(g).cwiseProduct(i).cwiseProduct(ones - i);
    const Eigen::VectorXd da_c =
        dcell.cwiseProduct(i).cwiseProduct(ones - g.cwiseProduct(g));

    const std::pair<const char*, const Eigen::VectorXd*> gates[] = {
        {"f", &da_f}, {"i", &da_i}, {"c", &da_c}, {"o", &da_o}};
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(di);
    Eigen::VectorXd dhp = Eigen::VectorXd::Zero(di);
    for (const auto& [suffix, da] : gates) {
      const std::string s(suffix);
      gw.m("W_" + s).noalias() += (*da) * x.transpose();
      gw.m("R_" + s).noalias() += (*da) * h_prev.transpose();
      gw.v("b_" + s) += *da;
      dx.noalias() += w.m("W_" + s).transpose() * (*da);
      dhp.noalias() += w.m("R_" + s).transpose() * (*da);
    }
    out.dx = to_std(dx);
    out.dh_prev = to_std(dhp);
    out.dc_prev = to_std(dcell.cwiseProduct(f));
  } else {
    const ConstVec z(tape.a.data(), di), r(tape.b.data(), di), u(tape.o.data(), di),
        g(tape.g.data(), di);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(di);

    const Eigen::VectorXd da_z =
        dhv.cwiseProduct(h_prev - g).cwiseProduct(z).cwiseProduct(ones - z);
    const Eigen::VectorXd da_h =
        dhv.cwiseProduct(ones - z).cwiseProduct(ones - g.cwiseProduct(g));
    const Eigen::VectorXd da_r =
        da_h.cwiseProduct(u).cwiseProduct(r).cwiseProduct(ones - r);
    const Eigen::VectorXd du = da_h.cwiseProduct(r);

    gw.m("W_z").noalias() += da_z * x.transpose();
    gw.m("R_z").noalias() += da_z * h_prev.transpose();
    gw.v("b_z") += da_z;
    gw.v("d_z") += da_z;
    gw.m("W_r").noalias() += da_r * x.transpose();
    gw.m("R_r").noalias() += da_r * h_prev.transpose();
    gw.v("b_r") += da_r;
    gw.v("d_r") += da_r;
    gw.m("W_h").noalias() += da_h * x.transpose();
    gw.v("b_h") += da_h;
    gw.m("R_h").noalias() += du * h_prev.transpose();
    gw.v("d_h") += du;

    const Eigen::VectorXd dx = w.m("W_z").transpose() * da_z +
                               w.m("W_r").transpose() * da_r +
                               w.m("W_h").transpose() * da_h;
    const Eigen::VectorXd dhp = dhv.cwiseProduct(z) + w.m("R_z").transpose() * da_z +
                                w.m("R_r").transpose() * da_r +
                                w.m("R_h").transpose() * du;
    out.dx = to_std(dx);
    out.dh_prev = to_std(dhp);
  }
  return out;
}

CellOutput lstm_forward(const CellWeights& weights,
                        std::span<const double> theta_in,
                        const CellState& state) {
  if (weights.kind() != CellKind::LSTM)
    throw std::invalid_argument("lstm_forward called with GRU weights");
  StepTape tape = forward_step(weights, theta_in, state);
  CellOutput out;
  out.theta = output_map(tape.h);
  out.state.h = std::move(tape.h);
  out.state.c = std::move(tape.c);
  return out;
}

CellOutput gru_forward(const CellWeights& weights,
                       std::span<const double> theta_in,
                       const CellState& state) {
  if (weights.kind() != CellKind::GRU)
    throw std::invalid_argument("gru_forward called with LSTM weights");
  StepTape tape = forward_step(weights, theta_in, state);
  CellOutput out;
  out.theta = output_map(tape.h);
  out.state.h = std::move(tape.h);
  return out;
}

CellOutput cell_forward(const CellWeights& weights,
                        std::span<const double> theta_in,
                        const CellState& state) {
  return weights.kind() == CellKind::LSTM ? lstm_forward(weights, theta_in, state)
                                          : gru_forward(weights, theta_in, state);
}

}  // namespace dcqaoa::metalearn
