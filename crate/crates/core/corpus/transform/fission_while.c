void f(int n) {
    int a[16];
    int b[16];
    int i;
    i = 0;
    while (i < n) {
        a[i] = i * 2;
        b[i] = i + 3;
        i = i + 1;
    }
}
