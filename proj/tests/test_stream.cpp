#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "stream.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace dysparse;
using namespace dysparse::testing;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("stream parsing") {
  std::ofstream out("stream_basic.txt");
  out << "# demo stream\n"
         "i 0 1 2.5\n"
         "d 3 4\n"
         "#batch\n"
         "i 2 5 1\n"
         "#batch\n";
  out.close();

  auto stream = load_update_stream("stream_basic.txt");
  REQUIRE(stream.events.size() == 3);
  CHECK(stream.batch_count == 2);
  CHECK(stream.events[0].kind == EdgeEvent::Kind::Insertion);
  CHECK(stream.events[0].weight == 2.5);
  CHECK(stream.events[0].batch_index == 0);
  CHECK(stream.events[1].kind == EdgeEvent::Kind::Deletion);
  CHECK(stream.events[1].batch_index == 0);
  CHECK(stream.events[2].batch_index == 1);
}

TEST_CASE("stream save/load round trip") {
  auto g = make_mesh(10, 10, 5);
  StreamGenOptions options;
  options.insert_fraction = 0.2;
  options.delete_fraction = 0.05;
  options.batches = 4;
  options.seed = 9;
  auto stream = generate_update_stream(g, options);
  save_update_stream(stream, "stream_round.txt");
  auto loaded = load_update_stream("stream_round.txt");
  REQUIRE(loaded.events.size() == stream.events.size());
  CHECK(loaded.batch_count == stream.batch_count);
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    CHECK(loaded.events[i].kind == stream.events[i].kind);
    CHECK(loaded.events[i].u == stream.events[i].u);
    CHECK(loaded.events[i].v == stream.events[i].v);
    CHECK(loaded.events[i].weight == stream.events[i].weight);
    CHECK(loaded.events[i].batch_index == stream.events[i].batch_index);
  }
}

TEST_CASE("malformed stream lines") {
  std::ofstream("stream_bad1.txt") << "i 0 1\n";
  CHECK_THROWS_AS(load_update_stream("stream_bad1.txt"), Error);
  std::ofstream("stream_bad2.txt") << "x 0 1\n";
  CHECK_THROWS_AS(load_update_stream("stream_bad2.txt"), Error);
  CHECK_THROWS_AS(load_update_stream("no_such_stream.txt"), Error);
}

TEST_CASE("generator arithmetic") {
  auto g = make_mesh(20, 20, 2);  // n = 400
  StreamGenOptions options;
  options.insert_fraction = 0.25;
  options.batches = 10;
  options.seed = 4;
  auto stream = generate_update_stream(g, options);
  REQUIRE(stream.events.size() == 100);  // 25% of |V|
  CHECK(stream.batch_count == 10);
  std::vector<int> per_batch(10, 0);
  for (const auto& event : stream.events) {
    CHECK(event.kind == EdgeEvent::Kind::Insertion);
    CHECK(!g.has_edge(event.u, event.v));
    ++per_batch[event.batch_index];
  }
  for (int count : per_batch) CHECK(count == 10);

  SUBCASE("deletions scale with edge count") {
    StreamGenOptions del;
    del.delete_fraction = 0.01;
    del.batches = 2;
    del.seed = 4;
    auto dstream = generate_update_stream(g, del);
    CHECK(dstream.events.size() ==
          static_cast<std::size_t>(std::llround(0.01 * g.edge_count())));
    for (const auto& event : dstream.events) {
      CHECK(event.kind == EdgeEvent::Kind::Deletion);
      CHECK(g.has_edge(event.u, event.v));
    }
  }
}

TEST_CASE("generator determinism") {
  auto g = make_mesh(12, 12, 3);
  StreamGenOptions options;
  options.insert_fraction = 0.3;
  options.delete_fraction = 0.02;
  options.batches = 5;
  options.seed = 77;
  auto a = generate_update_stream(g, options);
  auto b = generate_update_stream(g, options);
  save_update_stream(a, "stream_det_a.txt");
  save_update_stream(b, "stream_det_b.txt");
  CHECK(slurp("stream_det_a.txt") == slurp("stream_det_b.txt"));
}

TEST_CASE("generator rejects impossible requests") {
  // A complete graph has no non-edges left to insert.
  DynamicGraph g(4);
  for (VertexId u = 0; u < 4; ++u) {
    for (VertexId v = u + 1; v < 4; ++v) g.insert_edge(u, v, 1.0);
  }
  StreamGenOptions options;
  options.insert_fraction = 1.0;
  options.seed = 1;
  CHECK_THROWS_AS(generate_update_stream(g, options), Error);
}

TEST_CASE("locality-bounded insertions stay local") {
  auto g = make_mesh(15, 15, 8);
  StreamGenOptions options;
  options.insert_fraction = 0.2;
  options.batches = 3;
  options.seed = 21;
  options.locality = 3;
  auto stream = generate_update_stream(g, options);
  for (const auto& event : stream.events) {
    CHECK(hop_distance(g, event.u, event.v) <= 3);
  }
}
