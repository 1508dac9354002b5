void f(int n, int a) {
    int b;
    int t;
    b = a;
    for (int i = 0; i < n; i++) {
        t = a + b;
        a = b;
        b = t;
    }
}
