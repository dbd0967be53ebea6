#include "lagtomo/experiments.hpp"

namespace lagtomo {

Report run_barcode(const ExperimentConfig& cfg) {
  const auto& bc = cfg.barcode;
  Report rep("barcode", {"case", "lhs", "rhs", "margin", "status", "pass"});
  const BarcodeResult br = barcode(bc.field, bc.resolution);
  rep.attach("barcode.csv", barcode_csv(br.barcode));
  const std::string status = br.degenerate() ? "DEGENERATE" : "OK";
  rep.add_row({std::string("bars"), static_cast<double>(br.barcode.total()),
               static_cast<double>(br.barcode.infinite_count()), 0.0, status, !br.degenerate()});
  rep.add_row({std::string("noise_floor"), br.noise_floor, static_cast<double>(br.removed), 0.0, status,
               !br.degenerate()});
  if (br.degenerate()) {
    rep.set_status("DEGENERATE");
    rep.note(br.reason);
    return rep;
  }

  const BarIdentityReport id = verify_bar_identity(bc.field, bc.resolution, bc.sweep);
  const long indep = id.crit_independent;
  rep.add_row({std::string("crit_vs_2b_minus_h"), static_cast<double>(indep), static_cast<double>(id.two_b_minus_h),
               -std::abs(static_cast<double>(indep - id.two_b_minus_h)),
               std::string(id.independent_tangent ? "TANGENT" : "OK"), id.identity_holds});
  rep.add_row({std::string("crit_vs_barcode"), static_cast<double>(indep), static_cast<double>(id.crit_from_barcode),
               -std::abs(static_cast<double>(indep - id.crit_from_barcode)), std::string("OK"),
               indep == id.crit_from_barcode});
  rep.add_row({std::string("eps_sweep"), static_cast<double>(id.sweep_points), 0.0, 0.0, std::string("OK"),
               id.inequality_holds});
  rep.record_margin(static_cast<double>(-std::labs(indep - id.two_b_minus_h)));
  if (id.status == BarcodeStatus::Degenerate) rep.set_status("DEGENERATE");
  if (!id.identity_holds) rep.fail("critical count " + std::to_string(indep) + " != 2b - h = " + std::to_string(id.two_b_minus_h));
  if (!id.inequality_holds) rep.fail("count inequality fails somewhere on the eps sweep");
  return rep;
}

}  // namespace lagtomo
