#include <gtest/gtest.h>

#include <string>

#include "tcmerton/config.hpp"

using namespace tcmerton;

namespace {

const char* kTwoEquilibria =
    "[market]\nr=0.02\nmu=0.1\nsigma=0.3\n[preferences]\np=0.55\n[discount]\nkind=type1\nlambda=0.998\n"
    "rho1=0.088901\nrho2=0.068901";

Error error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return Error(ErrorKind::ParseError, "");
}

std::string flat(const std::string& discount, const std::string& extra = "") {
    return "[market]\nr=0\nmu=0\nsigma=0.2\n[preferences]\np=0.5\n[discount]\n" + discount + "\n" + extra;
}

}  // namespace

TEST(ParseConfig, TwoEquilibriaExample) {
    const auto cfg = parse_config(kTwoEquilibria);
    EXPECT_EQ(cfg.market, (MarketParams{0.02, 0.1, 0.3}));
    EXPECT_EQ(cfg.prefs.p, 0.55);
    EXPECT_TRUE(cfg.prefs.include_terminal);
    EXPECT_EQ(std::get<TypeI>(cfg.discount), (TypeI{0.998, 0.088901, 0.068901}));
    EXPECT_FALSE(cfg.horizon.has_value());
}

TEST(ParseConfig, CommentsWhitespaceAndOptionalBlocks) {
    const auto cfg = parse_config(
        "# leading comment\n[market]\n  r = 0.03   # trailing\nmu=0.08\nsigma=0.2\n\n[preferences]\np=-1\nterminal=false\n"
        "[discount]\nkind=type2\nlambda=0.2\nrho=0.1\n[finite]\nT=2\nsteps=50\ndemo_times=0, 0.5,1.5\n"
        "[simulation]\nx0=2\nn_paths=10\nn_steps=5\nhorizon=30\nmax_dt=1\ntail_tolerance=0.01\nseed=18446744073709551615\n"
        "[output]\ndir=/tmp/x\n");
    EXPECT_EQ(cfg.market.r, 0.03);
    EXPECT_FALSE(cfg.prefs.include_terminal);
    EXPECT_EQ(std::get<TypeII>(cfg.discount), (TypeII{0.2, 0.1}));
    EXPECT_EQ(cfg.horizon, 2.0);
    EXPECT_EQ(cfg.steps, 50);
    EXPECT_EQ(cfg.demo_times, (std::vector<double>{0.0, 0.5, 1.5}));
    EXPECT_EQ(cfg.sim.x0, 2.0);
    EXPECT_EQ(cfg.sim.n_paths, 10u);
    EXPECT_EQ(cfg.sim.n_steps, 5u);
    EXPECT_EQ(cfg.sim.horizon, 30.0);
    EXPECT_EQ(cfg.sim.max_dt, 1.0);
    EXPECT_EQ(cfg.sim.tail_tolerance, 0.01);
    EXPECT_EQ(cfg.sim.seed, 18446744073709551615ULL);
    EXPECT_EQ(cfg.output_dir, "/tmp/x");
}

TEST(ParseConfig, ZeroSigmaIsValidationError) {
    auto e = error_of("[market]\nr=0.02\nmu=0.1\nsigma=0\n[preferences]\np=0.5\n[discount]\nkind=exponential\ndelta=0.1");
    EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
}

TEST(ParseConfig, UnknownKindIsParseError) {
    auto e = error_of(flat("kind=type3"));
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 8"), std::string::npos) << e.what();
}

TEST(ParseConfig, ParseErrors) {
    EXPECT_EQ(error_of(flat("kind=exponential\ndelta=0.1\nrate=3")).kind(), ErrorKind::ParseError);
    EXPECT_EQ(error_of("r=0.1\n" + flat("kind=exponential\ndelta=0.1")).kind(), ErrorKind::ParseError);
    EXPECT_EQ(error_of(flat("kind=exponential\ndelta=0.1", "[extra]\n")).kind(), ErrorKind::ParseError);
    EXPECT_EQ(error_of(flat("kind=exponential\ndelta=0.1\ndelta=0.2")).kind(), ErrorKind::ParseError);
    EXPECT_EQ(error_of(flat("kind=exponential\ndelta=abc")).kind(), ErrorKind::ParseError);
    EXPECT_EQ(error_of(flat("kind=exponential\ndelta=0.1", "[finite]\nsteps=1.5\n")).kind(), ErrorKind::ParseError);
    EXPECT_EQ(error_of(flat("kind=exponential\ndelta=0.1\nno equals sign")).kind(), ErrorKind::ParseError);
}

TEST(ParseConfig, ValidationErrors) {
    EXPECT_EQ(error_of(flat("kind=exponential\ndelta=0")).kind(), ErrorKind::ValidationError);
    EXPECT_EQ(error_of(flat("kind=type1\nlambda=1.5\nrho1=0.1\nrho2=0.05")).kind(), ErrorKind::ValidationError);
    EXPECT_EQ(error_of(flat("kind=exponential\ndelta=0.1\nrho=0.2")).kind(), ErrorKind::ValidationError);
    EXPECT_EQ(error_of(flat("kind=exponential")).kind(), ErrorKind::ValidationError);
    EXPECT_EQ(error_of(flat("kind=exponential\ndelta=0.1", "[finite]\nT=1\nsteps=5\n")).kind(),
              ErrorKind::ValidationError);
    EXPECT_EQ(error_of(flat("kind=exponential\ndelta=0.1", "[finite]\nT=1\ndemo_times=0,1\n")).kind(),
              ErrorKind::ValidationError);
    EXPECT_EQ(error_of(flat("kind=exponential\ndelta=0.1", "[simulation]\nn_paths=0\n")).kind(),
              ErrorKind::ValidationError);
    EXPECT_EQ(error_of("[market]\nr=0\nmu=0\nsigma=0.2\n[preferences]\np=1\n[discount]\nkind=exponential\ndelta=0.1")
                  .kind(),
              ErrorKind::ValidationError);
    EXPECT_EQ(error_of("[market]\nr=0\nmu=-0.1\nsigma=0.2\n[preferences]\np=0.5\n[discount]\nkind=exponential\ndelta=0.1")
                  .kind(),
              ErrorKind::ValidationError);
}

TEST(ParseConfig, RoundTrip) {
    for (const std::string& text :
         {std::string(kTwoEquilibria), flat("kind=exponential\ndelta=0.1"),
          flat("kind=type2\nlambda=0.05\nrho=0.3",
               "[finite]\nT=3.25\nsteps=123\ndemo_times=0,0.1,2.2\n[simulation]\nx0=1.5\nn_paths=77\nn_steps=9\n"
               "horizon=400\nmax_dt=0.25\ntail_tolerance=1e-4\nseed=123456789\n[output]\ndir=some/where\n"),
          flat("kind=type1\nlambda=0.1\nrho1=0.3333333333333333\nrho2=0.1")}) {
        const auto first = parse_config(text);
        const auto second = parse_config(serialize_config(first));
        EXPECT_EQ(first, second) << serialize_config(first);
        EXPECT_EQ(serialize_config(first), serialize_config(second));
    }
    auto cfg = parse_config(flat("kind=exponential\ndelta=0.1"));
    cfg.market.r = 0.1 + 0.2;  // not a short decimal
    EXPECT_EQ(parse_config(serialize_config(cfg)), cfg);
}

TEST(Overrides, ReplaceAndValidate) {
    auto doc = parse_ini(kTwoEquilibria);
    apply_override(doc, "discount.lambda=0.5");
    apply_override(doc, "finite.T = 4");
    const auto cfg = build_config(doc);
    EXPECT_EQ(std::get<TypeI>(cfg.discount).lambda, 0.5);
    EXPECT_EQ(cfg.horizon, 4.0);
    EXPECT_THROW(apply_override(doc, "discount.gamma=1"), Error);
    EXPECT_THROW(apply_override(doc, "nodot=1"), Error);
    EXPECT_THROW(apply_override(doc, "market.r"), Error);
}
