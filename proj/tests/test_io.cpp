#include <gtest/gtest.h>

#include <filesystem>

#include "knapcrack/csv.hpp"
#include "knapcrack/error.hpp"
#include "knapcrack/io.hpp"

using namespace knapcrack;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected an Error");
}

}  // namespace

TEST(SystemText, RoundTrip) {
  const std::string text = "1 3\n3 15 6\n9\n";
  const LdeSystem sys = parse_system(text);
  EXPECT_EQ(sys.A(), (IntMatrix{{3, 15, 6}}));
  EXPECT_EQ(sys.b(), make_int_vector({9}));
  EXPECT_EQ(format_system(sys), text);
  EXPECT_EQ(format_system(sys, {"t=6 M=15"}), "# t=6 M=15\n" + text);
  EXPECT_EQ(parse_system(format_system(sys, {"note"})), sys);
}

TEST(SystemText, CommentsBlankLinesAndBigIntegers) {
  const std::string big = "123456789012345678901234567890";
  const LdeSystem sys = parse_system("# header\n\n2 3\r\n1 2 " + big + "\n  4 5 7\n# rhs\n10 20\n");
  EXPECT_EQ(sys.A()(0, 2), Integer(big));
  EXPECT_EQ(sys.b(), make_int_vector({10, 20}));
}

TEST(SystemText, Errors) {
  EXPECT_EQ(code_of([] { parse_system(""); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_system("1 3\n3 15\n9\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_system("1 3\n3 15 x\n9\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_system("1 3\n3 15 6\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_system("2 3\n1 2 3\n2 4 6\n1 2\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { read_system("/nonexistent/file.txt"); }), ErrorCode::IoFailure);
}

TEST(Files, WriteThenRead) {
  const auto path = std::filesystem::temp_directory_path() / "knapcrack_io_test.txt";
  write_text_file(path.string(), "1 2\n1 1\n1\n");
  EXPECT_EQ(read_system(path.string()).n(), 2u);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([] { write_text_file("/nonexistent/dir/x", "y"); }), ErrorCode::IoFailure);
}

TEST(OutcomeJson, RoundTrip) {
  AttackOutcome o;
  o.verdict.status = VerdictStatus::BinarySolution;
  o.verdict.algorithm = "reduce";
  o.verdict.x = make_int_vector({1, 0, 1});
  o.verdict.witness_column = 2;
  o.verdict.lambda = Integer("-123456789012345678901234567890");
  o.dag_used = true;
  o.t_found = 4;
  o.modulus_found = 15;
  o.attempts = 5;
  o.wall_ms = 1.5;
  const AttackOutcome back = outcome_from_json(outcome_to_json(o));
  EXPECT_EQ(back.verdict, o.verdict);
  EXPECT_EQ(back.t_found, o.t_found);
  EXPECT_EQ(back.modulus_found, o.modulus_found);
  EXPECT_EQ(back.attempts, 5u);
  EXPECT_DOUBLE_EQ(back.wall_ms, 1.5);
  EXPECT_NE(outcome_to_json(o).find("\"status\":\"BinarySolution\""), std::string::npos);

  const AttackOutcome empty = outcome_from_json(outcome_to_json(AttackOutcome{}));
  EXPECT_FALSE(empty.t_found.has_value());
  EXPECT_EQ(code_of([] { outcome_from_json("{"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { outcome_from_json("{}"); }), ErrorCode::ParseError);
}

TEST(Grid, Parse) {
  const auto cells = parse_grid("m,n,algo,dag,M,t_max,count,seed\n# comment\n\n1,16,reduce-half,1,1000,200,10,2001\n2, 30, cjloss, 0, 10000, 50, 5, 7\n");
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].algo, Algorithm::ReduceHalf);
  EXPECT_TRUE(cells[0].dag);
  EXPECT_EQ(cells[0].seed, 2001u);
  EXPECT_EQ(cells[1].m, 2u);
  EXPECT_EQ(cells[1].modulus, 10000);
  EXPECT_FALSE(cells[1].dag);
  EXPECT_EQ(code_of([] { parse_grid("1,16,reduce\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_grid("1,16,reduce,2,1000,200,10,1\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_grid("1,16,bkz,1,1000,200,10,1\n"); }), ErrorCode::ParseError);
}

TEST(Csv, EscapingAndBenchHeader) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(bench_csv({}), "m,n,algo,dag,M,t_max,count,successes,success_ratio,avg_valid_t,avg_ms,seed0\r\n");
  BenchRow row;
  row.cell.algo = Algorithm::Cjloss;
  row.successes = 9;
  row.success_ratio = 0.9;
  const std::string csv = bench_csv({row});
  EXPECT_NE(csv.find("\r\n1,16,cjloss,0,1000,200,10,9,0.9,,0,1\r\n"), std::string::npos);
}
