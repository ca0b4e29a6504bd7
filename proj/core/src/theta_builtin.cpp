// Shipped theta constants. Regenerated by `phifn theta --mmax 60 --emit-cpp <path>`; do not edit by hand.

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "phifn/backward_series.hpp"
#include "phifn/theta_table.hpp"

namespace phifn {
namespace detail {

const double kBuiltinThetaTol = 1.1102230246251565e-16;
const std::vector<ThetaEntry> kBuiltinTheta = {
    {1, 2.5809558934497545e-08},
    {2, 1.3863473213859834e-05},
    {3, 0.00033971678931266069},
    {4, 0.0024008750915527344},
    {5, 0.0090656522661447525},
    {6, 0.023844540119171143},
    {7, 0.049912258982658386},
    {8, 0.089577585458755493},
    {9, 0.1441829651594162},
    {10, 0.21423578262329102},
    {11, 0.29961585998535156},
    {12, 0.39977729320526123},
    {13, 0.51391452550888062},
    {14, 0.64108312129974365},
    {15, 0.78028738498687744},
    {16, 0.93053281307220459},
    {17, 1.0908633470535278},
    {18, 1.260380744934082},
    {19, 1.4382517337799072},
    {20, 1.6237151622772217},
    {21, 1.8160772323608398},
    {22, 2.0147097110748291},
    {23, 2.2190487384796143},
    {24, 2.428581714630127},
    {25, 2.6428532600402832},
    {26, 2.8614473342895508},
    {27, 3.0839991569519043},
    {28, 3.3101725578308105},
    {29, 3.5396647453308105},
    {30, 3.7722086906433105},
    {31, 4.0075588226318359},
    {32, 4.2454957962036133},
    {33, 4.4858193397521973},
    {34, 4.7283458709716797},
    {35, 4.9729108810424805},
    {36, 5.2193737030029297},
    {37, 5.4675865173339844},
    {38, 5.7174348831176758},
    {39, 5.9687995910644531},
    {40, 6.2215805053710938},
    {41, 6.475682258605957},
    {42, 6.7310142517089844},
    {43, 6.9875001907348633},
    {44, 7.2450637817382812},
    {45, 7.5036430358886719},
    {46, 7.7631711959838867},
    {47, 8.0235910415649414},
    {48, 8.2848501205444336},
    {49, 8.546900749206543},
    {50, 8.8096904754638672},
    {51, 9.073185920715332},
    {52, 9.3373394012451172},
    {53, 9.6021175384521484},
    {54, 9.8674964904785156},
    {55, 10.133419036865234},
    {56, 10.399885177612305},
    {57, 10.666847229003906},
    {58, 10.934286117553711},
    {59, 11.202182769775391},
    {60, 11.470499038696289},
};

}  // namespace detail

const ThetaTable& ThetaTable::builtin() {
  static const ThetaTable table = [] {
    if (detail::kBuiltinTheta.empty())  // bootstrap fallback
      return build_theta_table(60, std::ldexp(1.0, -53));
    std::map<int, double> values;
    for (const auto& e : detail::kBuiltinTheta) values.emplace(e.m, e.theta);
    return ThetaTable(detail::kBuiltinThetaTol, std::move(values));
  }();
  return table;
}

}  // namespace phifn
