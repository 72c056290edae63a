// Command-line front end: tensor generation and validation, positivity
// reports, averaging-identity checks, quadratic-form queries, comass and the
// spectral-constant table. All output is JSON on stdout with fixed key order
// and 17-significant-digit numbers; runs are deterministic under --seed.
//
// Exit codes: 0 success, 1 usage error, 2 malformed input or failed
// validation, 3 inconclusive-only results under --strict.

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "kcurv/kcurv.hpp"

namespace {

using kcurv::ordered_json;

kcurv::CurvatureTensor load_validated_tensor(const std::string& path, double tol) {
  const ordered_json j = kcurv::load_json_file(path);
  kcurv::CurvatureTensor R = kcurv::tensor_from_json(j);
  const kcurv::ValidationReport rep = kcurv::validate(R, tol);
  if (!rep.pass) {
    std::ostringstream os;
    os << path << ": tensor fails validation (symmetry residual " << rep.symmetry_residual
       << ", hermitian residual " << rep.hermitian_residual << ", tol " << tol << ")";
    throw std::invalid_argument(os.str());
  }
  return R;
}

ordered_json validation_to_json(const kcurv::ValidationReport& rep) {
  ordered_json j;
  j["schema"] = "1";
  j["symmetry_residual"] = rep.symmetry_residual;
  j["hermitian_residual"] = rep.hermitian_residual;
  j["tol"] = rep.tol;
  j["pass"] = rep.pass;
  return j;
}

kcurv::FormKind parse_form_kind(const std::string& s) {
  if (s == "qb") return kcurv::FormKind::QB;
  if (s == "cqb") return kcurv::FormKind::CQB;
  if (s == "dcqb") return kcurv::FormKind::DCQB;
  throw CLI::ValidationError("--kind", "expected qb|cqb|dcqb");
}

kcurv::CSpaceFamily parse_family(const std::string& s) {
  if (s == "B") return kcurv::CSpaceFamily::B;
  if (s == "C") return kcurv::CSpaceFamily::C;
  if (s == "D") return kcurv::CSpaceFamily::D;
  if (s == "F4") return kcurv::CSpaceFamily::F4;
  throw CLI::ValidationError("family", "expected B|C|D|F4");
}

ordered_json margins_to_json(const kcurv::CSpaceEntry& e, const kcurv::CSpaceMargins& m) {
  ordered_json j;
  j["schema"] = "1";
  j["family"] = kcurv::family_name(e.family);
  j["r"] = e.r;
  j["i"] = e.i;
  j["lambda"] = e.lambda.str();
  ordered_json nu1 = ordered_json::array();
  for (const auto& c : e.nu1_candidates) nu1.push_back(c.str());
  j["nu1_candidates"] = nu1;
  if (e.nu) j["nu"] = e.nu->str();
  j["worst_nu1"] = m.worst_nu1.str();
  j["lambda_plus_nu1"] = m.lambda_plus_nu1.str();
  j["lambda_plus_hq_nu1"] = m.lambda_plus_hq_nu1.str();
  if (m.lambda_minus_nu) j["lambda_minus_nu"] = m.lambda_minus_nu->str();
  j["positive_full"] = m.positive_full;
  j["positive_hq"] = m.positive_hq;
  j["positive_nu"] = m.positive_nu;
  return j;
}

void emit(const ordered_json& j) { std::cout << kcurv::dump_json(j); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pointwise Kahler curvature positivity toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // app-level flags are accepted after the subcommand

  double tol = kcurv::kDefaultValidationTol;
  app.add_option("--tol", tol, "validation tolerance (default 1e-9)");

  // validate ----------------------------------------------------------------
  auto* cmd_validate = app.add_subcommand("validate", "check the symmetries of a tensor file");
  std::string validate_path;
  cmd_validate->add_option("tensor", validate_path, "tensor JSON file")->required();

  // gen ---------------------------------------------------------------------
  auto* cmd_gen = app.add_subcommand("gen", "generate a model tensor file");
  std::vector<std::string> gen_space_form, gen_random, gen_product;
  int gen_flat = 0;
  std::string gen_out;
  double gen_scale = 1.0;
  cmd_gen->add_option("--space-form", gen_space_form, "n c: constant holomorphic sectional curvature")->expected(2);
  cmd_gen->add_option("--random", gen_random, "n seed: seeded random Kahler tensor")->expected(2);
  cmd_gen->add_option("--scale", gen_scale, "scale for --random (default 1)");
  cmd_gen->add_option("--product", gen_product, "a.json b.json: block product of two tensor files")->expected(2);
  cmd_gen->add_option("--flat", gen_flat, "n: zero tensor");
  cmd_gen->add_option("-o,--out", gen_out, "output file")->required();

  // report --------------------------------------------------------------------
  auto* cmd_report = app.add_subcommand("report", "full positivity report for a tensor file");
  std::string report_path, report_conditions, report_json_out;
  kcurv::OptimizerOptions report_opts;
  bool report_strict = false;
  cmd_report->add_option("tensor", report_path, "tensor JSON file")->required();
  cmd_report->add_option("--seed", report_opts.seed, "seed (default 0)");
  cmd_report->add_option("--restarts", report_opts.restarts, "optimizer restarts (default 32)");
  cmd_report->add_option("--max-iters", report_opts.max_iters, "optimizer iteration cap (default 500)");
  cmd_report->add_option("--eps", report_opts.eps, "positivity decision band (default 1e-6)");
  cmd_report->add_option("--samples", report_opts.sample_check, "fresh samples for the upper-bound audit");
  cmd_report->add_option("--conditions", report_conditions, "comma list of condition name prefixes");
  cmd_report->add_option("--json-out", report_json_out, "also write the report to this file");
  cmd_report->add_flag("--strict", report_strict, "exit 3 when inconclusive results remain");

  // identities ----------------------------------------------------------------
  auto* cmd_identities = app.add_subcommand("identities", "averaging-identity residuals for a tensor file");
  std::string identities_path;
  kcurv::IdentityCheckOptions id_opts;
  bool id_no_mc = false;
  cmd_identities->add_option("tensor", identities_path, "tensor JSON file")->required();
  cmd_identities->add_option("--seed", id_opts.seed, "seed (default 0)");
  cmd_identities->add_option("--samples", id_opts.mc_samples, "Monte Carlo samples per average");
  cmd_identities->add_option("--subspaces", id_opts.subspaces, "number of random subspaces");
  cmd_identities->add_flag("--no-mc", id_no_mc, "exact-moment path only");

  // quadform ------------------------------------------------------------------
  auto* cmd_quadform = app.add_subcommand("quadform", "quadratic-form spectra and rank-restricted minima");
  std::string quadform_path, quadform_kind = "cqb";
  int quadform_rank = 0, quadform_q = 1;
  bool quadform_min_eig = false, quadform_q_spectrum = false, quadform_ke = false;
  kcurv::OptimizerOptions quadform_opts;
  cmd_quadform->add_option("tensor", quadform_path, "tensor JSON file")->required();
  cmd_quadform->add_option("--kind", quadform_kind, "qb|cqb|dcqb (default cqb)");
  cmd_quadform->add_flag("--min-eig", quadform_min_eig, "smallest eigenvalue of the assembled form");
  cmd_quadform->add_option("--rank", quadform_rank, "rank-restricted minimum over maps of rank <= K");
  cmd_quadform->add_flag("--q-spectrum", quadform_q_spectrum, "spectrum of the symmetric curvature action");
  cmd_quadform->add_flag("--ke-bounds", quadform_ke, "Einstein sufficient margins");
  cmd_quadform->add_option("--q", quadform_q, "q for --ke-bounds (default 1)");
  cmd_quadform->add_option("--seed", quadform_opts.seed, "seed (default 0)");
  cmd_quadform->add_option("--restarts", quadform_opts.restarts, "optimizer restarts");

  // minimize ------------------------------------------------------------------
  auto* cmd_minimize = app.add_subcommand("minimize", "minimize a curvature functional");
  std::string minimize_path, minimize_target = "ric-perp", minimize_variant = "plain";
  int minimize_k = 1;
  kcurv::OptimizerOptions minimize_opts;
  cmd_minimize->add_option("tensor", minimize_path, "tensor JSON file")->required();
  cmd_minimize->add_option("--target", minimize_target, "h|ric|ric-perp|ric-plus|ric-k|s-k|bc-p");
  cmd_minimize->add_option("--k", minimize_k, "subspace dimension for ric-k/s-k/bc-p");
  cmd_minimize->add_option("--variant", minimize_variant, "plain|perp|plus for ric-k/s-k");
  cmd_minimize->add_option("--seed", minimize_opts.seed, "seed (default 0)");
  cmd_minimize->add_option("--restarts", minimize_opts.restarts, "optimizer restarts");

  // comass --------------------------------------------------------------------
  auto* cmd_comass = app.add_subcommand("comass", "comass of a (p,0)-covector file");
  std::string comass_path;
  kcurv::ComassOptions comass_opts;
  cmd_comass->add_option("form", comass_path, "covector JSON file")->required();
  cmd_comass->add_option("--restarts", comass_opts.restarts, "restarts (default 64)");
  cmd_comass->add_option("--seed", comass_opts.seed, "seed (default 0)");

  // cspace --------------------------------------------------------------------
  auto* cmd_cspace = app.add_subcommand("cspace", "spectral-constant table queries");
  std::vector<std::string> cspace_entry_args, cspace_check_args;
  int cspace_sweep_r = 0, cspace_q = 1;
  cmd_cspace->add_option("--entry", cspace_entry_args, "FAMILY R I: table entry")->expected(3);
  cmd_cspace->add_option("--check", cspace_check_args, "FAMILY R I: margins for one entry")->expected(3);
  cmd_cspace->add_option("--sweep", cspace_sweep_r, "check all classical entries with rank <= MAXR");
  cmd_cspace->add_option("--q", cspace_q, "largest q to check (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    if (*cmd_validate) {
      const ordered_json j = kcurv::load_json_file(validate_path);
      const kcurv::CurvatureTensor R = kcurv::tensor_from_json(j);
      const kcurv::ValidationReport rep = kcurv::validate(R, tol);
      emit(validation_to_json(rep));
      return rep.pass ? 0 : 2;
    }

    if (*cmd_gen) {
      kcurv::CurvatureTensor R;
      if (!gen_space_form.empty()) {
        R = kcurv::space_form(std::stoi(gen_space_form[0]), std::stod(gen_space_form[1]));
      } else if (!gen_random.empty()) {
        R = kcurv::random_kahler(std::stoi(gen_random[0]), std::stoull(gen_random[1]), gen_scale);
      } else if (!gen_product.empty()) {
        R = kcurv::product_tensor(load_validated_tensor(gen_product[0], tol), load_validated_tensor(gen_product[1], tol));
      } else if (gen_flat > 0) {
        R = kcurv::space_form(gen_flat, 0.0);
      } else {
        std::cerr << "gen: one of --space-form/--random/--product/--flat is required\n";
        return 1;
      }
      kcurv::write_text_file(gen_out, kcurv::dump_json(kcurv::tensor_to_json(R)));
      ordered_json j;
      j["schema"] = "1";
      j["written"] = gen_out;
      j["n"] = R.n;
      emit(j);
      return 0;
    }

    if (*cmd_report) {
      const kcurv::CurvatureTensor R = load_validated_tensor(report_path, tol);
      std::vector<std::string> filter;
      if (!report_conditions.empty()) {
        std::stringstream ss(report_conditions);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) filter.push_back(item);
      }
      const kcurv::PositivityReport rep = kcurv::full_report(R, report_opts, filter);
      const ordered_json j = kcurv::report_to_json(rep);
      const std::string text = kcurv::dump_json(j);
      std::cout << text;
      if (!report_json_out.empty()) kcurv::write_text_file(report_json_out, text);
      if (report_strict && rep.count(kcurv::Status::Inconclusive) > 0) return 3;
      return 0;
    }

    if (*cmd_identities) {
      const kcurv::CurvatureTensor R = load_validated_tensor(identities_path, tol);
      id_opts.run_mc = !id_no_mc;
      const auto residuals = kcurv::identity_residuals(R, id_opts);
      ordered_json j;
      j["schema"] = "1";
      j["n"] = R.n;
      j["samples"] = id_opts.mc_samples;
      ordered_json arr = ordered_json::array();
      for (const auto& r : residuals) {
        ordered_json e;
        e["name"] = r.name;
        e["residual"] = r.residual;
        e["stderr"] = r.stderr_;
        e["mc"] = r.mc;
        e["pass"] = r.mc ? r.residual <= 5.0 * r.stderr_ + 1e-12 : r.residual <= 1e-10;
        arr.push_back(e);
      }
      j["residuals"] = arr;
      emit(j);
      return 0;
    }

    if (*cmd_quadform) {
      const kcurv::CurvatureTensor R = load_validated_tensor(quadform_path, tol);
      const kcurv::FormKind kind = parse_form_kind(quadform_kind);
      ordered_json j;
      j["schema"] = "1";
      j["kind"] = kcurv::form_name(kind);
      if (quadform_q_spectrum) {
        const kcurv::OperatorSpectrum spec = kcurv::q_operator_spectrum(R);
        ordered_json evs = ordered_json::array();
        for (int i = 0; i < spec.eigenvalues.size(); ++i) evs.push_back(spec.eigenvalues(i));
        j["kind"] = "Q";
        j["eigenvalues"] = evs;
        j["nu1"] = spec.nu1();
        j["nu"] = spec.nu();
        j["certified"] = true;
      } else if (quadform_ke) {
        const kcurv::EinsteinResult ein = kcurv::einstein_constant(R);
        if (!ein.lambda) {
          std::ostringstream os;
          os << quadform_path << ": not Einstein (deviation " << ein.deviation << ")";
          throw std::invalid_argument(os.str());
        }
        const kcurv::KeBounds b = kcurv::ke_bounds(*ein.lambda, kcurv::q_operator_spectrum(R), quadform_q);
        j["kind"] = "ke_bounds";
        j["lambda"] = *ein.lambda;
        j["q"] = quadform_q;
        j["cqb_margin"] = b.cqb_margin;
        j["dcqb_margin"] = b.dcqb_margin;
        j["hq_margin"] = b.hq_margin;
        j["certified"] = true;
      } else if (quadform_rank > 0) {
        const kcurv::RankRestrictedMin m = kcurv::rank_restricted_min(R, kind, quadform_rank, quadform_opts);
        j["rank"] = quadform_rank;
        j["value"] = m.value;
        j["certified"] = !m.heuristic;
        j["converged"] = m.converged;
        j["witness"] = kcurv::matrix_to_json(m.witness);
      } else {
        // default: --min-eig
        const kcurv::AssembledForm form = kcurv::assemble_operator(R, kind);
        auto [value, witness] = form.min_eig_witness();
        j["value"] = value;
        j["certified"] = true;
        j["witness"] = kcurv::matrix_to_json(witness);
      }
      emit(j);
      return 0;
    }

    if (*cmd_minimize) {
      const kcurv::CurvatureTensor R = load_validated_tensor(minimize_path, tol);
      ordered_json j;
      j["schema"] = "1";
      j["kind"] = minimize_target;
      kcurv::RicKVariant variant = kcurv::RicKVariant::Plain;
      if (minimize_variant == "perp") variant = kcurv::RicKVariant::Perp;
      else if (minimize_variant == "plus") variant = kcurv::RicKVariant::Plus;
      else if (minimize_variant != "plain") throw CLI::ValidationError("--variant", "expected plain|perp|plus");
      if (minimize_target == "h" || minimize_target == "ric" || minimize_target == "ric-perp" ||
          minimize_target == "ric-plus") {
        kcurv::FunctionalKind fk = kcurv::FunctionalKind::H;
        if (minimize_target == "ric") fk = kcurv::FunctionalKind::Ric;
        if (minimize_target == "ric-perp") fk = kcurv::FunctionalKind::RicPerp;
        if (minimize_target == "ric-plus") fk = kcurv::FunctionalKind::RicPlus;
        const kcurv::SphereMin m = kcurv::min_over_sphere(R, fk, minimize_opts);
        j["value"] = m.value;
        j["certified"] = m.certified;
        j["converged"] = m.converged;
        j["witness"] = kcurv::vector_to_json(m.witness);
      } else if (minimize_target == "ric-k") {
        const kcurv::SubspaceMin m = kcurv::min_ric_k(R, minimize_k, variant, minimize_opts);
        j["k"] = minimize_k;
        j["variant"] = kcurv::ric_k_variant_name(variant);
        j["value"] = m.value;
        j["certified"] = m.certified;
        j["converged"] = m.converged;
        ordered_json w;
        w["frame"] = kcurv::matrix_to_json(m.sigma.frame);
        w["vector"] = kcurv::vector_to_json(m.v);
        j["witness"] = w;
      } else if (minimize_target == "s-k") {
        const kcurv::SKMin m = kcurv::min_s_k(R, minimize_k, variant, minimize_opts);
        j["k"] = minimize_k;
        j["variant"] = kcurv::ric_k_variant_name(variant);
        j["value"] = m.value;
        j["s_k"] = m.s_k_at;
        j["s_k_perp"] = m.s_k_perp_at;
        j["s_k_plus"] = m.s_k_plus_at;
        j["certified"] = m.certified;
        j["converged"] = m.converged;
        j["witness"] = kcurv::matrix_to_json(m.sigma.frame);
      } else if (minimize_target == "bc-p") {
        const kcurv::BcValue m = kcurv::bc_p_value(R, minimize_k, minimize_opts);
        j["p"] = minimize_k;
        j["value"] = m.value;
        j["certified"] = m.certified;
        j["converged"] = m.converged;
        j["witness"] = kcurv::matrix_to_json(m.sigma.frame);
      } else {
        throw CLI::ValidationError("--target", "expected h|ric|ric-perp|ric-plus|ric-k|s-k|bc-p");
      }
      emit(j);
      return 0;
    }

    if (*cmd_comass) {
      const ordered_json fj = kcurv::load_json_file(comass_path);
      const kcurv::PCovector w = kcurv::form_from_json(fj);
      const kcurv::WhitneyBounds b = kcurv::whitney_bounds_check(w, comass_opts);
      const kcurv::ComassResult res = kcurv::comass(w, comass_opts);
      ordered_json j;
      j["schema"] = "1";
      j["n"] = w.n;
      j["p"] = w.p;
      j["value"] = res.value;
      j["converged"] = res.converged;
      j["iterations"] = res.iterations;
      j["l2_norm"] = b.l2;
      j["lower_bound"] = b.lower_bound;
      j["upper_ok"] = b.upper_ok;
      j["lower_ok"] = b.lower_ok;
      j["witness"] = kcurv::matrix_to_json(res.witness);
      emit(j);
      return 0;
    }

    if (*cmd_cspace) {
      if (!cspace_entry_args.empty() || !cspace_check_args.empty()) {
        const auto& args = cspace_entry_args.empty() ? cspace_check_args : cspace_entry_args;
        const kcurv::CSpaceEntry e =
            kcurv::cspace_entry(parse_family(args[0]), std::stoi(args[1]), std::stoi(args[2]));
        emit(margins_to_json(e, kcurv::cspace_check(e, cspace_q)));
        return 0;
      }
      if (cspace_sweep_r > 0) {
        const kcurv::CSpaceSweepReport rep = kcurv::cspace_sweep(cspace_sweep_r, cspace_q);
        ordered_json j;
        j["schema"] = "1";
        j["max_r"] = cspace_sweep_r;
        j["q"] = cspace_q;
        j["entries"] = rep.entries;
        j["violations"] = rep.violations;
        ordered_json det = ordered_json::array();
        for (const auto& d : rep.violation_details) det.push_back(d);
        j["violation_details"] = det;
        emit(j);
        return rep.violations == 0 ? 0 : 2;
      }
      std::cerr << "cspace: one of --entry/--check/--sweep is required\n";
      return 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
