#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "densor/crystal.hpp"
#include "densor/io.hpp"
#include "densor/iso_engine.hpp"
#include "densor/modules.hpp"
#include "densor/pseudo_iso.hpp"

using namespace densor;

namespace {

constexpr int kOk = 0, kNegative = 1, kInconclusive = 2, kUsage = 64, kMalformed = 65;

constexpr const char* kConventions = R"(Conventions:
  Tensors are multilinear forms on a frame (V_0, ..., V_{l-1}). Entries are
  stored flat and row-major: axis 0 is the slowest index, the last axis the
  fastest. Operator tuples act on the right:
    <act(t, phi) | v_0, ..., v_{l-1}> = <t | phi_0 v_0, ..., phi_{l-1} v_{l-1}>.
  A 3-tensor read as a bimap V_2 x V_1 -> V_0 stores the trilinear form on
  V_2 x V_1 x V_0*. A bimap derivation (d2, d1, d0) with
    d0 <t|u, v> = <t|d2 u, v> + <t|u, d1 v>
  corresponds to the trilinear derivation (d2, d1, -d0^T).
  Field elements: integers over GF(p), coordinate lists (low degree first)
  over GF(p^k). Exit codes: 0 success, 1 negative verdict, 2 inconclusive,
  64 usage error, 65 malformed input.)";

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

Tensor load_tensor(const std::string& path) {
  try {
    return tensor_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

LieModule load_module(const std::string& path) {
  try {
    return module_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json basis_json(const std::vector<OperatorTuple>& basis) {
  Json b = Json::array();
  for (const auto& o : basis) b.push_back(tuple_to_json(o));
  return b;
}

Partition parse_partition(const std::vector<int>& parts, const char* name) {
  if (!is_partition(parts)) throw std::invalid_argument(std::string(name) + " is not a partition");
  return parts;
}

int verdict_code(Verdict v) {
  if (v == Verdict::Isomorphic) return kOk;
  return v == Verdict::NotIsomorphic ? kNegative : kInconclusive;
}

Json iso_json(const IsoResult& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = to_string(r.reason);
  j["detail"] = r.detail;
  j["orientation"] = "act(A, witness) = B";
  j["witness"] = r.witness ? tuple_to_json(*r.witness) : Json(nullptr);
  return j;
}

int compute_der(const std::string& path, bool bimap) {
  const Tensor t = load_tensor(path);
  const OperatorSpace D = derivation_algebra(t);
  const auto basis = D.basis();
  bool derivations = true, closed = true;
  for (const auto& x : basis) derivations = derivations && is_derivation(t, x);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t k = i + 1; k < basis.size(); ++k) closed = closed && D.contains(bracket(basis[i], basis[k]));
  Json j;
  j["dim"] = D.dim();
  j["basis"] = basis_json(basis);
  if (bimap) {
    if (t.dims().size() != 3) throw std::invalid_argument("--bimap needs a 3-tensor");
    std::vector<OperatorTuple> bm;
    for (const auto& x : basis) bm.push_back(trilinear_to_bimap(x));
    j["bimap_basis"] = basis_json(bm);
  }
  j["all_derivations"] = derivations;
  j["bracket_closed"] = closed;
  emit(j);
  return derivations && closed ? kOk : kNegative;
}

int compute_adj(const std::string& path) {
  const Tensor t = load_tensor(path);
  const OperatorSpace A = adjoint_algebra(t);
  const auto basis = A.basis();
  bool closed = true;
  for (const auto& x : basis)
    for (const auto& y : basis) closed = closed && A.contains(adjoint_product(x, y));
  Json j;
  j["dim"] = A.dim();
  j["basis"] = basis_json(basis);
  j["product_closed"] = closed;
  emit(j);
  return closed ? kOk : kNegative;
}

int compute_densor(const std::string& path) {
  const Tensor t = load_tensor(path);
  const TensorSubspace D = densor_space(t);
  Json j;
  j["dim"] = D.dim();
  Json b = Json::array();
  for (const auto& s : D.basis()) b.push_back(tensor_to_json(s));
  j["basis"] = std::move(b);
  j["contains_input"] = D.contains(t);
  emit(j);
  return kOk;
}

int iso_test(const std::string& a, const std::string& b, const std::string& method, Rng& rng) {
  const Tensor A = load_tensor(a), B = load_tensor(b);
  if (!(A.field() == B.field())) throw std::invalid_argument("inputs are over different fields");
  Method m = Method::Auto;
  if (method == "tiny") m = Method::Tiny;
  if (method == "brute") m = Method::Brute;
  IsoResult r;
  try {
    r = decide_iso(B, A, m, rng);
  } catch (const std::invalid_argument& e) {
    if (m != Method::Brute) throw;
    r.verdict = Verdict::Inconclusive;
    r.reason = IsoReason::OutsideHypotheses;
    r.detail = e.what();
  }
  emit(iso_json(r));
  return verdict_code(r.verdict);
}

int aut_gens(const std::string& path, Rng& rng) {
  const Tensor t = load_tensor(path);
  AutGenerators A;
  try {
    A = aut_generators(t, rng);
  } catch (const std::domain_error& e) {
    Json j;
    j["result"] = "outside_hypotheses";
    j["reason"] = e.what();
    emit(j);
    return kInconclusive;
  }
  Json j;
  j["count"] = A.generators.size();
  j["generators"] = basis_json(A.generators);
  auto order = generated_order(t.frame(), A.generators);
  j["generated_order"] = order ? Json(*order) : Json(nullptr);
  emit(j);
  return kOk;
}

int decompose_module(const std::string& path, Rng& rng) {
  const LieModule V = load_module(path);
  Json j;
  j["dimV"] = V.dim;
  try {
    const MatrixLieAlgebra L = MatrixLieAlgebra::make(V.field, V.dim, V.action);
    const IdealDecomposition dec = minimal_ideals(L, rng);
    j["center_dim"] = dec.abelian.size();
    if (dec.simple.empty()) throw std::domain_error("no nonabelian ideals to factor over");
    const FullFactorization f = full_tensor_decompose(dec.simple, V.dim, rng);
    Json factors = Json::array();
    for (std::size_t i = 0; i < f.dims.size(); ++i) {
      Json fi;
      fi["ideal_dim"] = dec.simple[i].size();
      fi["dim"] = f.dims[i];
      factors.push_back(std::move(fi));
    }
    j["factors"] = std::move(factors);
    j["delta"] = "K";
    j["iso"] = matrix_to_json(f.iso);
    j["verified"] = verify_full_factorization(f, dec.simple);
  } catch (const std::domain_error& e) {
    j["result"] = "unsupported";
    j["reason"] = e.what();
    emit(j);
    return kInconclusive;
  }
  emit(j);
  return kOk;
}

int pseudo_iso_cmd(const std::string& a, const std::string& b, Rng& rng) {
  const LieModule A = load_module(a), B = load_module(b);
  if (!(A.field == B.field)) throw std::invalid_argument("inputs are over different fields");
  Json j;
  PseudoIsoResult r;
  try {
    r = pseudo_iso(A, B, rng);
  } catch (const std::domain_error& e) {
    r.status = PseudoIsoStatus::Inconclusive;
    r.reason = e.what();
  }
  j["result"] = r.status == PseudoIsoStatus::Found ? "iso" : r.status == PseudoIsoStatus::None ? "none" : "inconclusive";
  j["reason"] = r.reason;
  if (r.iso) {
    Json psi = Json::array();
    for (const auto& m : r.iso->psi) psi.push_back(matrix_to_json(m));
    j["psi"] = std::move(psi);
    j["psi_coords"] = matrix_to_json(r.iso->psi_coords);
    j["Psi"] = matrix_to_json(r.iso->Psi);
  }
  emit(j);
  if (r.status == PseudoIsoStatus::Found) return kOk;
  return r.status == PseudoIsoStatus::None ? kNegative : kInconclusive;
}

int lr_count(const std::vector<int>& lambda, const std::vector<int>& mu, const std::vector<int>& nu) {
  const Partition l = parse_partition(lambda, "lambda"), m = parse_partition(mu, "mu");
  Json j;
  j["lambda"] = l;
  j["mu"] = m;
  if (!nu.empty()) {
    const Partition n = parse_partition(nu, "nu");
    j["nu"] = n;
    j["count"] = lr_coefficient(l, m, n);
  } else {
    Json d = Json::array();
    for (const auto& [shape, c] : lr_decomposition(l, m)) {
      Json e;
      e["nu"] = shape;
      e["count"] = c;
      d.push_back(std::move(e));
    }
    j["decomposition"] = std::move(d);
  }
  emit(j);
  return kOk;
}

int family_gen(int n, int m, std::uint32_t p, std::uint32_t k, const std::string& out, Rng& rng) {
  if (n < 1 || m < 1) throw std::invalid_argument("--n and --m must be positive");
  const Field F = Field::make(p, k);
  Json j;
  j["n"] = n;
  j["m"] = m;
  j["field"] = field_to_json(F);
  Json members = Json::array();
  for (const auto& lam : family_partitions(m, n)) {
    const FamilyMember f = family_tensor(n, lam, F, rng);
    Json e;
    e["lambda"] = lam;
    e["module_dim"] = f.module.dim;
    e["tensor"] = tensor_to_json(f.bimap);
    if (!out.empty()) {
      std::string name = "family";
      for (int x : lam) name += "_" + std::to_string(x);
      const auto file = std::filesystem::path(out) / (name + ".json");
      std::ofstream(file) << tensor_to_json(f.bimap).dump(2) << "\n";
      e["file"] = file.string();
    }
    members.push_back(std::move(e));
  }
  j["members"] = std::move(members);
  emit(j);
  return kOk;
}

int gen_example_cmd(const ExampleParams& params, Rng& rng) {
  emit(tensor_to_json(gen_example(params, rng)));
  return kOk;
}

int galois_cmd(const std::vector<std::string>& paths, const std::string& form, const std::string& ops) {
  std::vector<Tensor> S;
  for (const auto& p : paths) S.push_back(load_tensor(p));
  for (const auto& s : S)
    if (!(s.frame() == S[0].frame())) throw std::invalid_argument("tensors on different frames");
  const Frame& fr = S[0].frame();
  const LinearForm p = form == "adj" ? LinearForm::adjoint(fr.field, fr.arity()) : LinearForm::derivation(fr.field, fr.arity());
  std::vector<OperatorTuple> U;
  if (!ops.empty()) {
    const Json j = read_json_file(ops);
    if (!j.is_array()) throw ParseError(ops + ": expected a list of operator tuples");
    for (std::size_t i = 0; i < j.size(); ++i) U.push_back(tuple_from_json(fr, j[i], ops + "[" + std::to_string(i) + "]"));
  } else {
    U = op_space(S, p).basis();
  }
  const GaloisCheck g = galois_check(S, p, U);
  Json j;
  j["tensors_in_ten"] = g.tensors_in_ten;
  j["operators_in_op"] = g.operators_in_op;
  j["consistent"] = g.consistent();
  emit(j);
  return g.consistent() ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact tensor isomorphism toolkit over finite fields"};
  app.footer(kConventions);
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 1;
  int threads = 0;
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0 keeps the default)");

  std::string a, b, method = "auto", form = "der", ops, out;
  std::vector<std::string> files;
  bool bimap = false;
  std::vector<int> lambda, mu, nu;
  int n = 2, m = 2;
  std::uint32_t p = 5, k = 1;
  ExampleParams ex;
  std::vector<std::size_t> dims;

  auto* der = app.add_subcommand("compute-der", "derivation algebra of a tensor");
  der->add_option("tensor", a, "tensor file")->required();
  der->add_flag("--bimap", bimap, "also report the bimap (d2, d1, d0) triples");
  auto* adj = app.add_subcommand("compute-adj", "adjoint algebra of a tensor");
  adj->add_option("tensor", a, "tensor file")->required();
  auto* den = app.add_subcommand("compute-densor", "densor space Ten(d, Der(t))");
  den->add_option("tensor", a, "tensor file")->required();
  auto* iso = app.add_subcommand("iso-test", "decide whether two tensors are isomorphic");
  iso->add_option("A", a, "tensor file")->required();
  iso->add_option("B", b, "tensor file")->required();
  iso->add_option("--method", method, "auto, tiny or brute")->check(CLI::IsMember({"auto", "tiny", "brute"}));
  auto* brute = app.add_subcommand("brute-iso", "exhaustive isomorphism search");
  brute->add_option("A", a, "tensor file")->required();
  brute->add_option("B", b, "tensor file")->required();
  auto* aut = app.add_subcommand("aut-gens", "generators of the automorphism group");
  aut->add_option("tensor", a, "tensor file")->required();
  auto* dec = app.add_subcommand("decompose-module", "tensor factorization of a simple module over its ideals");
  dec->add_option("module", a, "module file")->required();
  auto* piso = app.add_subcommand("pseudo-iso", "pseudo-isomorphism of two Lie modules");
  piso->add_option("A", a, "module file")->required();
  piso->add_option("B", b, "module file")->required();
  auto* lr = app.add_subcommand("lr-count", "Littlewood-Richardson coefficients");
  lr->add_option("--lambda", lambda, "partition, comma separated")->delimiter(',')->required();
  lr->add_option("--mu", mu, "partition, comma separated")->delimiter(',')->required();
  lr->add_option("--nu", nu, "partition; omit for the full decomposition")->delimiter(',');
  auto* fam = app.add_subcommand("family-gen", "family tensors for sl_{n+1} and shapes of size m");
  fam->add_option("--n", n, "rank")->required();
  fam->add_option("--m", m, "shape size")->required();
  fam->add_option("--field", p, "characteristic")->required();
  fam->add_option("--k", k, "extension degree");
  fam->add_option("--out", out, "directory for one tensor file per member");
  auto* gen = app.add_subcommand("gen-example", "named example tensors");
  gen->add_option("--name", ex.name, "dot, matmul, heisenberg, family or random")->required();
  gen->add_option("--dims", dims, "dimensions, comma separated")->delimiter(',');
  gen->add_option("--field", p, "characteristic")->required();
  gen->add_option("--k", k, "extension degree");
  gen->add_option("--n", n, "family rank");
  gen->add_option("--lambda", lambda, "family shape")->delimiter(',');
  gen->add_flag("--bimap", bimap, "dot product as an (n, n, 1) tensor");
  auto* gal = app.add_subcommand("galois-check", "Ten/Op Galois correspondence check");
  gal->add_option("tensors", files, "tensor files")->required();
  gal->add_option("--form", form, "der or adj")->check(CLI::IsMember({"der", "adj"}));
  gal->add_option("--ops", ops, "operator tuple list (default: Op(S, form))");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (threads > 0) set_thread_count(threads);
  Rng rng(seed);
  try {
    if (*der) return compute_der(a, bimap);
    if (*adj) return compute_adj(a);
    if (*den) return compute_densor(a);
    if (*iso) return iso_test(a, b, method, rng);
    if (*brute) return iso_test(a, b, "brute", rng);
    if (*aut) return aut_gens(a, rng);
    if (*dec) return decompose_module(a, rng);
    if (*piso) return pseudo_iso_cmd(a, b, rng);
    if (*lr) return lr_count(lambda, mu, nu);
    if (*fam) return family_gen(n, m, p, k, out, rng);
    if (*gen) {
      ex.dims = dims;
      ex.p = p;
      ex.k = k;
      ex.n = n;
      ex.lambda = lambda;
      ex.bimap = bimap;
      return gen_example_cmd(ex, rng);
    }
    if (*gal) return galois_cmd(files, form, ops);
  } catch (const ParseError& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kMalformed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const LasVegasAbort& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconclusive;
  }
  return kUsage;
}
