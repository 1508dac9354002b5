void f(int n, int a, int b) {
    while (n > 0) {
        a = a + 2;
        n = n - 1;
    }
    while (a > 0) {
        b = b + n;
        a = a - 1;
    }
}
