/*
Copyright 2026 The rosie Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#include "support.hpp"

namespace rosie::testing {

const char* const kToyNt =
    "<p1> <type> <Post> .\n"
    "<p2> <type> <Post> .\n"
    "<u1> <creator_of> <p1> .\n"
    "<u1> <creator_of> <p2> .\n"
    "<p1> <content> \"a\" .\n"
    "<p2> <content> \"b\" .\n"
    "<u1> <type> <User> .\n"
    "<u1> <knows> <u2> .\n";

Dataset toy_dataset() { return dataset_from_nt(kToyNt); }

const char* const kExampleQuery = R"(PREFIX : <http://example.org/>
SELECT * WHERE {
  ?u1 a :User .
  ?u1 :gender "female" .
  ?u1 :creator_of ?p1 .
  ?p1 a :Post .
  ?p1 :lang "en" .
  ?p1 :content ?pc .
  FILTER regex(str(?pc), "SPARQL")
  { ?u1 :knows ?u2 } UNION { ?u2 a :User . ?u1 :follows ?u2 }
  OPTIONAL { ?p1 :likedBy ?u2 . ?u1 :friendOf ?u2 }
}
)";

// T1..T11
std::vector<double> example_weights() { return {300, 40, 200, 70, 10, 500, 400, 300, 450, 900, 600}; }

const char* const kExampleCs =
    "((((((T5 And T4) And (T6 Filter C)) And T3) And T2) And T1) And (T7 Or (T9 And T8))) Opt (T11 And T10)";

}  // namespace rosie::testing
