#include "slnw/certificate.hpp"

#include "doctest.h"

using namespace slnw;

namespace {

IntMatrix e(int n, int i, int j, long x) {
  return IntMatrix::elementary(n, i, j, mpz_class(x));
}

FactorCertificate sample_cert() {
  long q = 2;
  IntMatrix u = e(3, 1, 2, 2 * q) * e(3, 2, 3, q);
  IntMatrix l = e(3, 2, 1, q);
  IntMatrix h = e(3, 3, 1, 5);
  IntMatrix k = e(3, 1, 3, q);
  FactorCertificate cert(l * (h * k * h.inverse()) * u, q);
  cert.factors.push_back(make_L(l));
  cert.factors.push_back(make_Uc(h, k));
  cert.factors.push_back(make_U(u));
  return cert;
}

}  // namespace

TEST_CASE("verify accepts a well-formed certificate") {
  FactorCertificate cert = sample_cert();
  CHECK(cert.class_sequence() == "L,Uc,U");
  VerifyReport rep = cert.verify();
  CHECK(rep.ok);
  CHECK(rep.detail.empty());
}

TEST_CASE("verify rejects class violations and bad products") {
  FactorCertificate cert = sample_cert();
  cert.factors[2].matrix.set_entry(1, 2, cert.factors[2].matrix.entry(1, 2) + 1);
  VerifyReport rep = cert.verify();
  CHECK(!rep.ok);
  CHECK(rep.failed_factor == 3);

  FactorCertificate cert2 = sample_cert();
  cert2.input.set_entry(1, 1, 2);
  VerifyReport rep2 = cert2.verify();
  CHECK(!rep2.ok);
  CHECK(rep2.failed_factor == -1);

  // witness tampering is caught
  FactorCertificate cert3 = sample_cert();
  cert3.factors[1].witness_k =
      IntMatrix::elementary(3, 1, 3, mpz_class(1));  // wrong level
  VerifyReport rep3 = cert3.verify();
  CHECK(!rep3.ok);
  CHECK(rep3.failed_factor == 2);
}

TEST_CASE("serialization round trip with checksum") {
  FactorCertificate cert = sample_cert();
  std::string text = cert.serialize();
  FactorCertificate back = FactorCertificate::deserialize(text);
  CHECK(back.q == cert.q);
  CHECK(back.input == cert.input);
  REQUIRE(back.factors.size() == cert.factors.size());
  CHECK(back.class_sequence() == cert.class_sequence());
  CHECK(back.verify().ok);
  CHECK(back.serialize() == text);

  // single-character tamper breaks the checksum
  std::string bad = text;
  size_t pos = bad.find("matrix ");
  bad[pos + 7] = bad[pos + 7] == '1' ? '2' : '1';
  CHECK_THROWS_AS(FactorCertificate::deserialize(bad), std::invalid_argument);
}
