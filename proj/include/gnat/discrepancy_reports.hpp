#pragma once
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gnat {

// Evaluation of the Kaluza-Klein-type criterion for alpha1 = 1, beta1 = beta3 = 0,
// alpha1 + alpha3 = (2/3) t^{3/2} + c, against the expected closed form -2 sqrt(t), together with
// the full bitension of the parallel field on a grid of rho.
nlohmann::json kk_three_halves_report();

// Agreement matrix between the positive roots of the published cubic for lambda = a t e^{bt}
// and the zero set of the non-biharmonicity bracket evaluated from lambda jets.
nlohmann::json lambda_exp_cubic_report();

std::vector<std::string> discrepancy_report_names();
nlohmann::json discrepancy_report(const std::string& name);

}  // namespace gnat
