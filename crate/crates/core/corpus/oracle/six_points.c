void f(int n, int a, int b, int c) {
    for (int i = 0; i < n; i++) {
        a = a + b + c;
        b = b + 1;
    }
    c = a + b - c;
    a = c + 1;
}
