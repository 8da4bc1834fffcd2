#pragma once

#include <array>

// Fused silica, three-term Sellmeier series, lambda in um:
//   n^2 - 1 = sum_j B_j lambda^2 / (lambda^2 - C_j)
// I. H. Malitson, "Interspecimen comparison of the refractive index of fused silica",
// J. Opt. Soc. Am. 55, 1205 (1965). C_j are the squared resonance wavelengths.
namespace sfwm::sellmeier {

inline constexpr std::array<double, 3> kB = {0.6961663, 0.4079426, 0.8974794};
inline constexpr std::array<double, 3> kC = {0.0684043 * 0.0684043, 0.1162414 * 0.1162414,
                                             9.896161 * 9.896161};
inline constexpr double kLambdaMinUm = 0.21;
inline constexpr double kLambdaMaxUm = 3.7;

}  // namespace sfwm::sellmeier
