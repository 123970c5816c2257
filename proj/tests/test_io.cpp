/*
 * Copyright 2026 The smd Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "smd/io.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

namespace smd {
namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("smd_io_" + name)).string();
}

ComplexMatrix parse(const std::string& text, MatrixFormat format) {
  std::istringstream in(text);
  return read_matrix(in, format);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Validation;
}

TEST(ReadMatrix, SpecExamples) {
  EXPECT_EQ(parse(R"({"n":1,"entries":[[[1.0,0.0]]]})", MatrixFormat::Json), ComplexMatrix::Ones(1, 1));
  ComplexMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  EXPECT_EQ(parse("0,1\n1,0", MatrixFormat::Csv), swap);
  EXPECT_EQ(parse("1+2i", MatrixFormat::Csv)(0, 0), Complex(1, 2));
}

TEST(ReadMatrix, CsvTokenForms) {
  const ComplexMatrix m = parse("3.5, -2i, i\n-i, 1e-3-4.5e2i, +7\n 2-i ,0,-1.25e+1+0i\n", MatrixFormat::Csv);
  EXPECT_EQ(m(0, 0), Complex(3.5, 0));
  EXPECT_EQ(m(0, 1), Complex(0, -2));
  EXPECT_EQ(m(0, 2), Complex(0, 1));
  EXPECT_EQ(m(1, 0), Complex(0, -1));
  EXPECT_EQ(m(1, 1), Complex(1e-3, -4.5e2));
  EXPECT_EQ(m(1, 2), Complex(7, 0));
  EXPECT_EQ(m(2, 0), Complex(2, -1));
  EXPECT_EQ(m(2, 2), Complex(-12.5, 0));
}

TEST(ReadMatrix, ErrorsCarryPositions) {
  try {
    parse("1,2\n3,x4\n", MatrixFormat::Csv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("line 2, column 3"), std::string::npos) << e.what();
  }
  try {
    parse("{\"n\": 1,\n \"entries\": [[[1, 0]]\n", MatrixFormat::Json);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
  }
  EXPECT_EQ(kind_of([] { parse("1,2\n3\n", MatrixFormat::Csv); }), ErrorKind::NonSquare);
  EXPECT_EQ(kind_of([] { parse("1,2,3\n4,5,6\n", MatrixFormat::Csv); }), ErrorKind::NonSquare);
  EXPECT_EQ(kind_of([] { parse(R"({"n":2,"entries":[[[1,0]]]})", MatrixFormat::Json); }), ErrorKind::NonSquare);
  EXPECT_EQ(kind_of([] { parse(R"({"n":1,"entries":[[[1]]]})", MatrixFormat::Json); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { parse("", MatrixFormat::Csv); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { read_matrix(temp_path("does_not_exist.json")); }), ErrorKind::Io);
}

TEST(WriteMatrix, RoundTripsBitExact) {
  Rng rng(1);
  ComplexMatrix m = complex_gaussian_matrix(rng, 5, 5);
  m(0, 0) = Complex(0.1, 1.0 / 3.0);
  m(1, 1) = Complex(5e-324, -1.7976931348623157e308);
  const std::string path = temp_path("matrix.json");
  write_matrix(m, path);
  const ComplexMatrix back = read_matrix(path);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    EXPECT_EQ(std::memcmp(&m.data()[i], &back.data()[i], sizeof(Complex)), 0);
  std::filesystem::remove(path);
}

FactorChain sample_chain() {
  const int n = 3;
  DecompositionProblem problem{n,
                               {make_family(FamilyKind::of(FamilyTag::SkewSymmetric), n),
                                make_family(FamilyKind::of(FamilyTag::KDiagonalUpper, 2), n),
                                make_family(random_subspace(n, 4, 8), n),
                                make_family(FamilyKind::of(FamilyTag::GeneralizedVandermonde, -2), n)},
                               TargetSpace{TargetTag::Full, n}};
  Rng rng(2);
  FactorChain chain;
  chain.problem = problem;
  for (const auto& f : problem.factors) {
    auto [p, m] = sample_point(f, rng);
    chain.params.push_back(p);
    chain.factors.push_back(m);
  }
  const ComplexMatrix target = complex_gaussian_matrix(rng, n, n);
  chain.residual = chain_residual(chain.factors, target);
  chain.iterations = 17;
  chain.converged = false;
  return chain;
}

TEST(WriteChain, RoundTrip) {
  const FactorChain chain = sample_chain();
  const std::string path = temp_path("chain.json");
  write_chain(chain, path);
  const FactorChain back = read_chain(path);
  EXPECT_TRUE(back == chain);
  std::filesystem::remove(path);
}

TEST(WriteChain, ResidualIsRederivable) {
  Rng rng(3);
  const ComplexMatrix target = complex_gaussian_matrix(rng, 4, 4);
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::TriangularUpper), 4, 2, TargetTag::Full);
  FactorChain chain;
  chain.problem = problem;
  for (const auto& f : problem.factors) {
    auto [p, m] = sample_point(f, rng);
    chain.params.push_back(p);
    chain.factors.push_back(m);
  }
  chain.residual = chain_residual(chain.factors, target);
  const FactorChain back = chain_from_json(Json::parse(chain_to_json(chain).dump()));
  EXPECT_EQ(chain_residual(back.factors, target), back.residual);
}

TEST(WriteChain, EmptyChainIsRejected) {
  FactorChain empty;
  empty.problem = DecompositionProblem{3, {}, TargetSpace{TargetTag::Full, 3}};
  EXPECT_THROW(chain_to_json(empty), Error);
  Json j = chain_to_json(sample_chain());
  j["problem"]["factors"] = Json::array();
  j["params"] = Json::array();
  j["factors"] = Json::array();
  EXPECT_THROW(chain_from_json(j), Error);
}

TEST(WriteChain, RejectsSchemaAndShapeProblems) {
  Json j = chain_to_json(sample_chain());
  Json wrong_version = j;
  wrong_version["schema_version"] = "2";
  EXPECT_EQ(kind_of([&] { chain_from_json(wrong_version); }), ErrorKind::Parse);
  Json short_params = j;
  short_params["params"].erase(0);
  EXPECT_EQ(kind_of([&] { chain_from_json(short_params); }), ErrorKind::LengthMismatch);
  EXPECT_EQ(kind_of([] { write_chain(sample_chain(), "/nonexistent-dir/x.json"); }), ErrorKind::Io);
}

TEST(Report, RoundTrip) {
  const auto problem = uniform_problem(FamilyKind::of(FamilyTag::SkewSymmetric), 4, 3, TargetTag::Full);
  DominanceReport report = estimate_image_dimension(problem, 3, 1e-8, 5);
  report.notes.push_back("note");
  const std::string path = temp_path("report.json");
  write_report(report, path);
  EXPECT_EQ(read_report(path), report);
  std::filesystem::remove(path);
}

TEST(FitOptionsJson, PartialAndInvalid) {
  const FitOptions opts = fit_options_from_json(Json::parse(R"({"restarts": 3, "seed": 9})"));
  EXPECT_EQ(opts.restarts, 3);
  EXPECT_EQ(opts.seed, 9u);
  EXPECT_EQ(opts.max_iterations, 200);
  EXPECT_THROW(fit_options_from_json(Json::parse(R"({"residual_tol": 2})")), Error);
  EXPECT_THROW(fit_options_from_json(Json::parse(R"({"restarts": "many"})")), Error);
}

TEST(CompanionJson, Fields) {
  ComplexMatrix a(2, 2);
  a << 0, 1, 2, 3;
  const Json failed = companion_result_to_json(decompose_companion(a));
  EXPECT_EQ(failed["status"], "no-solution");
  EXPECT_EQ(failed["failed_column"], 2);
  const Json ok = companion_result_to_json(decompose_companion(ComplexMatrix::Identity(2, 2)));
  EXPECT_EQ(ok["status"], "unique");
  EXPECT_TRUE(ok["failed_column"].is_null());
  EXPECT_EQ(ok["columns"].size(), 2u);
}

}  // namespace
}  // namespace smd
