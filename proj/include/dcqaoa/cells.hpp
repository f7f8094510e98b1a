#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dcqaoa::metalearn {

enum class CellKind { LSTM, GRU };

std::string_view to_string(CellKind kind);
CellKind parse_cell_kind(std::string_view name);

/**
 * Flat storage for one recurrent cell with input dim == hidden dim == d.
 *
 * LSTM: W_f W_i W_c W_o R_f R_i R_c R_o (d x d, row-major) then
 *       b_f b_i b_c b_o.
 * GRU:  W_z W_r W_h R_z R_r R_h then b_z b_r b_h d_z d_r d_h.
 *
 * The flat vector is what optimizers step on; the named blocks are views.
 */
class CellWeights {
 public:
  CellWeights(CellKind kind, std::size_t dim);

  static std::size_t count(CellKind kind, std::size_t dim);
  static const std::vector<std::string>& matrix_names(CellKind kind);
  static const std::vector<std::string>& vector_names(CellKind kind);

  CellKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  /// Row-major d x d block, or length-d bias block.
  std::span<double> block(std::string_view name);
  std::span<const double> block(std::string_view name) const;

  friend bool operator==(const CellWeights&, const CellWeights&) = default;

 private:
  std::size_t offset(std::string_view name) const;

  CellKind kind_;
  std::size_t dim_;
  std::vector<double> data_;
};

struct CellState {
  std::vector<double> h;
  std::vector<double> c;  // LSTM only; empty for GRU
};

CellState zero_state(CellKind kind, std::size_t dim);

/// theta = pi * h.
std::vector<double> output_map(std::span<const double> h);

struct CellOutput {
  std::vector<double> theta;
  CellState state;
};

CellOutput lstm_forward(const CellWeights& weights,
                        std::span<const double> theta_in,
                        const CellState& state);
CellOutput gru_forward(const CellWeights& weights,
                       std::span<const double> theta_in,
                       const CellState& state);
CellOutput cell_forward(const CellWeights& weights,
                        std::span<const double> theta_in,
                        const CellState& state);

/// Intermediate activations of one step, kept for the backward pass.
struct StepTape {
  std::vector<double> x, h_prev, c_prev;
  // LSTM: f, i, g (candidate), o, c, tanh(c). GRU: z, r, u = R_h h + d_h, g.
  std::vector<double> a, b, g, o, c, tanh_c;
  std::vector<double> h;
};

/// One forward step recording its tape.
StepTape forward_step(const CellWeights& weights, std::span<const double> x,
                      const CellState& state);

struct StepGradients {
  std::vector<double> dx;
  std::vector<double> dh_prev;
  std::vector<double> dc_prev;  // LSTM only
};

/// Back-propagates dL/dh (and dL/dc for the LSTM) through one step,
/// accumulating into grad (same layout as weights.flat()).
StepGradients backward_step(const CellWeights& weights, const StepTape& tape,
                            std::span<const double> dh,
                            std::span<const double> dc,
                            std::span<double> grad);

}  // namespace dcqaoa::metalearn
