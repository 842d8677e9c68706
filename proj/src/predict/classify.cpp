#include "lava/predict/classify.hpp"

#include <cmath>

namespace lava {

double log_error(double pred_s, double true_s) {
    if (!(pred_s > 0.0) || !(true_s > 0.0)) throw NonPositiveInput("log_error requires positive inputs");
    return std::fabs(std::log10(pred_s) - std::log10(true_s));
}

}  // namespace lava
