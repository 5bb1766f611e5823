/*
 * Copyright 2026 The trajeval Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "trajeval/noise.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

#include "testutil.hpp"
#include "trajeval/error.hpp"

using namespace trajeval;
using trajeval::testutil::corpus_path;

namespace {

NoiseConfig config_with(double probability, std::vector<NoiseKind> types,
                        std::uint64_t seed) {
  NoiseConfig config;
  config.probability = Ratio::from_decimal(
      probability == 1 ? "1" : probability == 0 ? "0" : "0.2");
  config.enabled_types = std::move(types);
  config.seed = seed;
  return config;
}

const MockApp& miniblog() {
  static std::vector<MockApp> apps = load_mock_apps(corpus_path("apps.json"));
  for (const MockApp& app : apps) {
    if (app.app_id == "miniblog") return app;
  }
  FAIL("miniblog app missing");
  return apps.front();
}

Action click_at(int x, int y) {
  return parse_unified_action("click(point='<point>" + std::to_string(x) + " " +
                              std::to_string(y) + "</point>')");
}

const Action kMyTab = click_at(880, 2310);

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("probability zero never fires, probability one always fires") {
  NoiseInjector never(config_with(0, {NoiseKind::Repeat}, 1));
  for (int i = 0; i < 100; ++i) CHECK_FALSE(never.sample_noise().has_value());

  NoiseInjector always(config_with(1, {NoiseKind::Delay}, 1));
  for (int i = 0; i < 100; ++i) {
    auto kind = always.sample_noise();
    REQUIRE(kind.has_value());
    CHECK(*kind == NoiseKind::Delay);
  }
}

TEST_CASE("empirical rate within 3 sigma and types uniform at seed 42") {
  NoiseConfig config = config_with(0.2,
                                   {NoiseKind::Repeat, NoiseKind::Unexecuted,
                                    NoiseKind::Delay, NoiseKind::PopUp},
                                   42);
  NoiseInjector injector(config);
  const int draws = 10000;
  int fired = 0;
  std::map<NoiseKind, int> per_type;
  for (int i = 0; i < draws; ++i) {
    if (auto kind = injector.sample_noise()) {
      ++fired;
      ++per_type[*kind];
    }
  }
  double rate = static_cast<double>(fired) / draws;
  CHECK(rate >= 0.188);
  CHECK(rate <= 0.212);
  // Uniform type choice among the fired events, 3 sigma on p=1/4.
  double sigma = std::sqrt(0.25 * 0.75 / fired);
  for (NoiseKind kind : config.enabled_types) {
    double share = static_cast<double>(per_type[kind]) / fired;
    CHECK(std::abs(share - 0.25) <= 3 * sigma);
  }
}

TEST_CASE("schedules are bit-identical for one seed and shift across seeds") {
  auto schedule = [](std::uint64_t seed) {
    NoiseInjector injector(config_with(0.2,
                                       {NoiseKind::Repeat, NoiseKind::Unexecuted,
                                        NoiseKind::Delay, NoiseKind::PopUp},
                                       seed));
    std::vector<int> out;
    for (int i = 0; i < 500; ++i) {
      auto kind = injector.sample_noise();
      out.push_back(kind ? static_cast<int>(*kind) + 1 : 0);
    }
    return out;
  };
  CHECK(schedule(7) == schedule(7));
  CHECK(schedule(7) != schedule(8));
}

TEST_CASE("fixed draw budget: the fire/type schedule ignores template pulls") {
  // Two injectors, same seed; one burns template choices between samples by
  // firing popups on a real env. The sampling schedule must not shift.
  NoiseConfig config = config_with(0.2,
                                   {NoiseKind::Repeat, NoiseKind::Unexecuted,
                                    NoiseKind::Delay, NoiseKind::PopUp},
                                   11);
  NoiseInjector plain(config);
  NoiseInjector busy(config);
  DeviceEnv env(miniblog());
  std::vector<int> a;
  std::vector<int> b;
  for (int i = 0; i < 200; ++i) {
    auto lhs = plain.sample_noise();
    a.push_back(lhs ? static_cast<int>(*lhs) + 1 : 0);
    auto rhs = busy.sample_noise();
    b.push_back(rhs ? static_cast<int>(*rhs) + 1 : 0);
    if (!busy.has_unresolved()) {
      busy.apply_noise(NoiseKind::PopUp, kMyTab, env, i);  // extra template pull
    } else {
      busy.resolve_noise(click_at(890, 850), env);  // close, to re-arm
    }
  }
  CHECK(a == b);
}

TEST_CASE("repeat equals two sequential plain executions") {
  DeviceEnv env(miniblog());
  DeviceEnv twice(miniblog());
  twice.execute(kMyTab);
  twice.execute(kMyTab);

  NoiseInjector injector(config_with(1, {NoiseKind::Repeat}, 5));
  Observation seen = injector.apply_noise(NoiseKind::Repeat, kMyTab, env, 0);
  CHECK_FALSE(seen.masked);
  CHECK(env.digest() == twice.digest());
  CHECK(seen.xml == twice.observe());
}

TEST_CASE("repeat on a next-page button lands two pages ahead") {
  // Inline three-page app whose next button keeps its region across pages.
  std::vector<MockApp> apps = parse_mock_apps(R"({
    "apps": [{
      "app_id": "pager",
      "initial_page": "p1",
      "pages": [
        {"page_id": "p1", "xml": "<hierarchy><node text='page one' bounds='[0,0][1080,2400]'/></hierarchy>"},
        {"page_id": "p2", "xml": "<hierarchy><node text='page two' bounds='[0,0][1080,2400]'/></hierarchy>"},
        {"page_id": "p3", "xml": "<hierarchy><node text='page three' bounds='[0,0][1080,2400]'/></hierarchy>"}
      ],
      "transitions": [
        {"from": "p1", "action": "click", "region": "[900,2200][1060,2360]", "to": "p2"},
        {"from": "p2", "action": "click", "region": "[900,2200][1060,2360]", "to": "p3"}
      ]
    }]
  })");
  DeviceEnv env(apps[0]);
  NoiseInjector injector(config_with(1, {NoiseKind::Repeat}, 5));
  injector.apply_noise(NoiseKind::Repeat, click_at(980, 2280), env, 0);
  CHECK(env.page_id() == "p3");
}

TEST_CASE("unexecuted leaves the digest untouched") {
  DeviceEnv env(miniblog());
  std::uint64_t before = env.digest();
  std::string view = env.observe();
  NoiseInjector injector(config_with(1, {NoiseKind::Unexecuted}, 5));
  Observation seen = injector.apply_noise(NoiseKind::Unexecuted, kMyTab, env, 0);
  CHECK(env.digest() == before);
  CHECK(seen.xml == view);
  CHECK_FALSE(injector.has_unresolved());
}

TEST_CASE("delay masks the executed action until resolved") {
  DeviceEnv env(miniblog());
  DeviceEnv reference(miniblog());
  reference.execute(kMyTab);

  NoiseInjector injector(config_with(1, {NoiseKind::Delay}, 5));
  Observation masked = injector.apply_noise(NoiseKind::Delay, kMyTab, env, 0);
  CHECK(masked.masked);
  CHECK(masked.xml.find("Loading") != std::string::npos);
  CHECK(env.digest() == reference.digest());  // action already executed, hidden
  REQUIRE(injector.has_unresolved());
  CHECK(injector.unresolved_event()->kind == NoiseKind::Delay);

  SUBCASE("wait reveals the true result page") {
    Observation revealed =
        injector.resolve_noise(parse_unified_action("wait()"), env);
    CHECK_FALSE(revealed.masked);
    CHECK(revealed.xml == reference.observe());
    CHECK_FALSE(injector.has_unresolved());
  }

  SUBCASE("any other action executes on the hidden page") {
    // Clicking the avatar row acts on the hidden profile page.
    Observation revealed = injector.resolve_noise(click_at(540, 480), env);
    reference.execute(click_at(540, 480));
    CHECK_FALSE(revealed.masked);
    CHECK(env.digest() == reference.digest());
    CHECK(env.page_id() == "avatar_dialog");
  }
}

TEST_CASE("popup blocks until the close element is clicked") {
  DeviceEnv env(miniblog());
  DeviceEnv reference(miniblog());
  reference.execute(kMyTab);

  NoiseInjector injector(config_with(1, {NoiseKind::PopUp}, 5));
  Observation masked = injector.apply_noise(NoiseKind::PopUp, kMyTab, env, 0);
  CHECK(masked.masked);
  CHECK(masked.xml.find("popup_close") != std::string::npos);
  CHECK(env.digest() == reference.digest());

  // Anything but the close click bounces off the modal.
  std::uint64_t frozen = env.digest();
  for (const char* attempt : {"press_back()", "wait()",
                              "click(point='<point>500 1200</point>')",
                              "scroll(point='<point>540 1600</point>', direction='up')"}) {
    Observation still = injector.resolve_noise(parse_unified_action(attempt), env);
    CHECK(still.masked);
    CHECK(env.digest() == frozen);
    CHECK(injector.has_unresolved());
  }

  // The close click (inside [860,820][920,880]) reveals the real page.
  Observation revealed = injector.resolve_noise(click_at(890, 850), env);
  CHECK_FALSE(revealed.masked);
  CHECK(revealed.xml == reference.observe());
  CHECK_FALSE(injector.has_unresolved());
}

TEST_CASE("delay or popup without template pages errors") {
  std::vector<MockApp> apps = parse_mock_apps(R"({
    "apps": [{
      "app_id": "bare",
      "initial_page": "p",
      "pages": [{"page_id": "p", "xml": "<hierarchy><node text='x'/></hierarchy>"}]
    }]
  })");
  DeviceEnv env(apps[0]);
  NoiseInjector injector(config_with(1, {NoiseKind::Delay, NoiseKind::PopUp}, 5));
  try {
    injector.apply_noise(NoiseKind::Delay, kMyTab, env, 0);
    FAIL_CHECK("expected NoTemplatePages");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::NoTemplatePages);
  }
  try {
    injector.apply_noise(NoiseKind::PopUp, kMyTab, env, 0);
    FAIL_CHECK("expected NoTemplatePages");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::NoTemplatePages);
  }
}

TEST_CASE("injecting on top of an unresolved event is a precondition error") {
  DeviceEnv env(miniblog());
  NoiseInjector injector(config_with(1, {NoiseKind::PopUp}, 5));
  injector.apply_noise(NoiseKind::PopUp, kMyTab, env, 0);
  REQUIRE(injector.has_unresolved());
  try {
    injector.apply_noise(NoiseKind::Repeat, kMyTab, env, 1);
    FAIL_CHECK("expected InvariantViolation");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::InvariantViolation);
  }
}

TEST_CASE("config validation") {
  NoiseConfig empty_types;
  empty_types.enabled_types.clear();
  CHECK_THROWS_AS(empty_types.validate(), Error);

  NoiseConfig ok;
  ok.probability = Ratio(0, 1);
  ok.enabled_types.clear();
  ok.validate();  // probability zero permits an empty set

  NoiseConfig misaligned;
  misaligned.type_weights = {1.0};
  CHECK_THROWS_AS(misaligned.validate(), Error);
}

TEST_CASE("per-type weights steer the choice") {
  NoiseConfig config;
  config.probability = Ratio(1, 1);
  config.enabled_types = {NoiseKind::Repeat, NoiseKind::PopUp};
  config.type_weights = {0.0, 1.0};
  config.seed = 9;
  NoiseInjector injector(config);
  for (int i = 0; i < 200; ++i) {
    auto kind = injector.sample_noise();
    REQUIRE(kind.has_value());
    CHECK(*kind == NoiseKind::PopUp);
  }
}

}  // TEST_SUITE
