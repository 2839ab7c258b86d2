#pragma once

// Reference solutions computed ahead of the build with an external
// brute-force load-flow script (fixed-point nodal solve, tolerance 1e-13,
// cross-checked against an independent sweep implementation to 1e-11).
namespace frozen {

// 33-bus feeder, 12.66 kV / 1 MVA base, no capacitors
inline constexpr double kBase1266PLossKw = 202.677126456;
inline constexpr double kBase1266QLossKvar = 135.140970973;
inline constexpr double kBase1266VminPu = 0.913090479361;

// 33-bus feeder, 11 kV / 1 MVA base, no capacitors
inline constexpr double kBase11PLossKw = 283.221669886;
inline constexpr double kBase11QLossKvar = 189.004189295;
inline constexpr double kBase11VminPu = 0.881453791315;
inline constexpr int kBase11VminBus = 18;
inline constexpr double kBase11VdPu = 2.316040699428;
inline constexpr double kBase11VsiMin = 0.603666916766;
inline constexpr double kBase11RawFitness = 4.015655332800;  // default weights

// 33-bus feeder, 11 kV, one 1579 kvar capacitor at bus 30
inline constexpr double kCap30PLossKw = 202.383233750;
inline constexpr double kCap30QLossKvar = 136.843339987;
inline constexpr double kCap30VminPu = 0.902988996909;

// two-bus feeder: z = 0.02 + j0.01 pu, load 0.1 + j0.05 pu
inline constexpr double kTwoBusV2 = 0.997493718553310;
inline constexpr double kTwoBusVd = 0.002506281446690;
inline constexpr double kTwoBusVsi2 = 0.99;  // exact: 1 - 4*(0.1*0.02 + 0.05*0.01)

}  // namespace frozen
