#include <doctest.h>

#include <sstream>

#include "pdnsa/entry.hpp"
#include "pdnsa/public_suffix.hpp"
#include "support.hpp"

using namespace pdnsa;

TEST_SUITE("names") {
  TEST_CASE("parse splits labels and counts levels") {
    const Fqdn www = Fqdn::parse("www.foo.com.");
    CHECK(www.labels() == std::vector<std::string_view>{"www", "foo", "com"});
    CHECK(www.level() == 3);
    CHECK(www.dotted() == "www.foo.com");
    CHECK(www.canonical() == "www.foo.com.");

    const Fqdn com = Fqdn::parse("com.");
    CHECK(com.labels() == std::vector<std::string_view>{"com"});
    CHECK(com.level() == 1);

    const Fqdn t = Fqdn::parse("dsu9jr2czl.teriava.com.");
    CHECK(t.labels() == std::vector<std::string_view>{"dsu9jr2czl", "teriava", "com"});
  }

  TEST_CASE("level counts labels with the TLD as level one") {
    CHECK(level(Fqdn::parse("www.example.com")) == 3);
    CHECK(level(Fqdn::parse("com")) == 1);
    CHECK(level(Fqdn::parse("a.b.c.d.e.foo.com")) == 7);
  }

  TEST_CASE("label_length by level") {
    const Fqdn www = Fqdn::parse("www.foo.com");
    CHECK(label_length(www, 3) == 3);
    CHECK_FALSE(label_length(www, 4).has_value());
    CHECK(label_length(Fqdn::parse("dsu9jr2czl.teriava.com"), 3) == 10);
    CHECK(label_length(www, 1) == 3);
    CHECK(www.label_at_level(2) == "foo");
    CHECK(www.tld() == "com");
  }

  TEST_CASE("normalization folds ASCII case only and keeps raw text") {
    const Fqdn n = Fqdn::parse("MiXeD.Example.COM.");
    CHECK(n.dotted() == "mixed.example.com");
    CHECK(n.raw() == "MiXeD.Example.COM.");
    const Fqdn u = Fqdn::parse("\xC3\x84rger.de");
    CHECK(u.dotted() == "\xC3\x84rger.de");
    CHECK(Fqdn::parse("a.b.") == Fqdn::parse("A.B"));
  }

  TEST_CASE("malformed names are rejected with a reason") {
    auto kind = [](std::string_view raw) {
      const auto r = Fqdn::try_parse(raw);
      return std::holds_alternative<NameErrorKind>(r) ? std::get<NameErrorKind>(r) : NameErrorKind{255};
    };
    CHECK(kind("") == NameErrorKind::EmptyName);
    CHECK(kind(".") == NameErrorKind::EmptyName);
    CHECK(kind("a..b") == NameErrorKind::EmptyLabel);
    CHECK(kind(".a.b") == NameErrorKind::EmptyLabel);
    CHECK(kind("a.b..") == NameErrorKind::EmptyLabel);
    CHECK(kind(std::string(64, 'x') + ".com") == NameErrorKind::LabelTooLong);
    CHECK(std::holds_alternative<Fqdn>(Fqdn::try_parse(std::string(63, 'x') + ".com")));

    std::string long_name;
    while (long_name.size() < 250) long_name += std::string(9, 'a') + ".";
    long_name += "com";  // 253 bytes
    REQUIRE(long_name.size() == 253);
    CHECK(std::holds_alternative<Fqdn>(Fqdn::try_parse(long_name)));
    CHECK(std::holds_alternative<Fqdn>(Fqdn::try_parse(long_name + ".")));
    CHECK(kind("a" + long_name) == NameErrorKind::NameTooLong);
    CHECK_THROWS_AS(Fqdn::parse("a..b"), NameError);
  }

  TEST_CASE("suffix and subdomain relation are label aligned") {
    const Fqdn n = Fqdn::parse("a.b.example.com");
    CHECK(n.suffix(2).dotted() == "example.com");
    CHECK(n.suffix(9).dotted() == "a.b.example.com");
    CHECK(n.is_subdomain_of(Fqdn::parse("example.com")));
    CHECK(n.is_subdomain_of(n));
    CHECK_FALSE(Fqdn::parse("xexample.com").is_subdomain_of(Fqdn::parse("example.com")));
  }
}

TEST_SUITE("sld") {
  TEST_CASE("domain field wins when it is a suffix of rrname") {
    auto e = support::entry("dsu9jr2czl.teriava.com.", "A", "2017-07-01 09:35:04", {"127.0.0.1"}, "teriava.com.");
    const SldResult r = second_level_domain(e);
    CHECK(r.sld.dotted() == "teriava.com");
    CHECK_FALSE(r.suffix_mismatch);
  }

  TEST_CASE("without a domain field the last two labels are used") {
    auto e = support::entry("t.vasi.li");
    CHECK(second_level_domain(e).sld.dotted() == "vasi.li");
  }

  TEST_CASE("public suffix list gives the registrable domain") {
    std::istringstream rules("// comment\ncom\nau\ncom.au\n*.kawasaki.jp\n!city.kawasaki.jp\njp\n");
    const PublicSuffixList psl = PublicSuffixList::parse(rules);
    auto e = support::entry("x.seek.com.au");
    CHECK(second_level_domain(e, &psl).sld.dotted() == "seek.com.au");
    CHECK(second_level_domain(e).sld.dotted() == "com.au");
    CHECK(psl.registrable_domain(Fqdn::parse("a.b.foo.kawasaki.jp"))->dotted() == "b.foo.kawasaki.jp");
    CHECK(psl.registrable_domain(Fqdn::parse("www.city.kawasaki.jp"))->dotted() == "city.kawasaki.jp");
    CHECK_FALSE(psl.registrable_domain(Fqdn::parse("com.au")).has_value());
  }

  TEST_CASE("a domain field that is not a suffix is flagged and ignored") {
    auto e = support::entry("a.example.com", "A", "2017-07-01 00:00:00", {}, "other.org");
    const SldResult r = second_level_domain(e);
    CHECK(r.sld.dotted() == "example.com");
    CHECK(r.suffix_mismatch);
  }

  TEST_CASE("shipped sample list loads") {
    const auto psl = PublicSuffixList::load(std::string(PDNSA_DATA_DIR) + "/public_suffix_sample.dat");
    CHECK(psl.size() > 10);
    CHECK(psl.registrable_domain(Fqdn::parse("a.b.foo.co.uk"))->dotted() == "foo.co.uk");
  }
}
